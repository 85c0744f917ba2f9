#include "ontokit/ks_valuation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ontokit {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void parse_header(const std::string& line, VectorSet& set, int lineno) {
  std::istringstream in(line);
  std::string kv;
  bool have_dim = false;
  while (in >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw VectorSetError("malformed header field '" + kv + "'", lineno);
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    try {
      if (key == "dim") {
        set.dim = std::stoi(val);
        have_dim = true;
      } else if (key == "radical") {
        set.radicand = std::stoll(val);
      } else {
        throw VectorSetError("unknown header field '" + key + "'", lineno);
      }
    } catch (const std::logic_error&) {
      throw VectorSetError("bad header value '" + kv + "'", lineno);
    }
  }
  if (!have_dim) throw VectorSetError("header must declare dim=<d>", lineno);
  if (set.dim < 3) throw VectorSetError("dim must be >= 3", lineno);
  if (set.radicand < 0) throw VectorSetError("radical must be >= 0", lineno);
  if (set.radicand > 0 && is_perfect_square(set.radicand)) {
    throw VectorSetError("radical must not be a perfect square", lineno);
  }
}

// Bron-Kerbosch with pivoting over sorted adjacency lists.
void bron_kerbosch(const std::vector<std::vector<int>>& adj, std::vector<int>& r, std::vector<int> p,
                   std::vector<int> x, std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    std::vector<int> c = r;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
    return;
  }
  auto neighbours_in = [&](int u, const std::vector<int>& s) {
    std::vector<int> res;
    std::set_intersection(s.begin(), s.end(), adj[u].begin(), adj[u].end(), std::back_inserter(res));
    return res;
  };
  int pivot = -1;
  std::size_t best = 0;
  for (const auto* s : {&p, &x}) {
    for (int u : *s) {
      const auto k = neighbours_in(u, p).size();
      if (pivot < 0 || k > best) {
        pivot = u;
        best = k;
      }
    }
  }
  std::vector<int> candidates;
  std::set_difference(p.begin(), p.end(), adj[pivot].begin(), adj[pivot].end(), std::back_inserter(candidates));
  for (int v : candidates) {
    r.push_back(v);
    bron_kerbosch(adj, r, neighbours_in(v, p), neighbours_in(v, x), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.insert(std::upper_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

VectorSet parse_vector_set(const std::string& text) {
  VectorSet set;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      parse_header(line, set, lineno);
      header_seen = true;
      continue;
    }
    ExactRay ray;
    ray.source_line = lineno;
    if (const auto colon = line.find(':'); colon != std::string::npos) {
      ray.label = trim(line.substr(0, colon));
      line = trim(line.substr(colon + 1));
    }
    std::istringstream toks(line);
    std::string tok;
    while (toks >> tok) {
      try {
        ray.entries.push_back(Surd::parse(tok, set.radicand));
      } catch (const VectorSetError&) {
        throw;
      } catch (const std::exception& e) {
        throw VectorSetError(e.what(), lineno);
      }
    }
    if (static_cast<int>(ray.entries.size()) != set.dim) {
      throw VectorSetError("expected " + std::to_string(set.dim) + " entries, got " +
                               std::to_string(ray.entries.size()),
                           lineno);
    }
    if (std::all_of(ray.entries.begin(), ray.entries.end(), [](const Surd& s) { return s.is_zero(); })) {
      throw VectorSetError("zero vector", lineno);
    }
    for (const auto& other : set.rays) {
      if (exactly_parallel(other, ray)) {
        throw VectorSetError("parallel rays (also on line " + std::to_string(other.source_line) + ")", lineno);
      }
    }
    if (ray.label.empty()) ray.label = "v" + std::to_string(set.rays.size() + 1);
    set.rays.push_back(std::move(ray));
  }
  if (!header_seen) throw VectorSetError("missing header line", 0);
  return set;
}

VectorSet load_vector_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw VectorSetError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_vector_set(ss.str());
}

std::string format_vector_set(const VectorSet& set) {
  std::ostringstream out;
  out << "dim=" << set.dim << " radical=" << set.radicand << "\n";
  for (const auto& r : set.rays) {
    out << r.label << ":";
    for (const auto& e : r.entries) out << " " << e.str();
    out << "\n";
  }
  return out.str();
}

Surd exact_dot(const ExactRay& a, const ExactRay& b) {
  Surd acc;
  for (std::size_t i = 0; i < a.entries.size(); ++i) acc = acc + a.entries[i] * b.entries[i];
  return acc;
}

bool exactly_parallel(const ExactRay& a, const ExactRay& b) {
  const std::size_t d = a.entries.size();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const Surd minor = a.entries[i] * b.entries[j] + Surd(Rational(-1), Rational(0), 0) * a.entries[j] * b.entries[i];
      if (!minor.is_zero()) return false;
    }
  }
  return true;
}

OrthogonalityGraph OrthogonalityGraph::from_edges(int n, int dim, std::vector<std::pair<int, int>> edges) {
  OrthogonalityGraph g;
  g.n = n;
  g.dim = dim;
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("self-loop in orthogonality graph");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  g.adjacency.assign(n, {});
  for (const auto& [i, j] : g.edges) {
    g.adjacency[i].push_back(j);
    g.adjacency[j].push_back(i);
  }
  for (auto& a : g.adjacency) std::sort(a.begin(), a.end());

  std::vector<int> r;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  bron_kerbosch(g.adjacency, r, all, {}, g.maximal_orthogonal_sets);
  std::sort(g.maximal_orthogonal_sets.begin(), g.maximal_orthogonal_sets.end());
  for (const auto& c : g.maximal_orthogonal_sets) {
    if (static_cast<int>(c.size()) == dim) g.bases.push_back(c);
    if (static_cast<int>(c.size()) > dim) throw std::invalid_argument("orthogonal set larger than dimension");
  }
  return g;
}

bool OrthogonalityGraph::adjacent(int i, int j) const {
  return std::binary_search(adjacency[i].begin(), adjacency[i].end(), j);
}

OrthogonalityGraph OrthogonalityGraph::induced(const std::vector<int>& keep) const {
  std::vector<int> index(n, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) index[keep[k]] = static_cast<int>(k);
  std::vector<std::pair<int, int>> e;
  for (const auto& [i, j] : edges) {
    if (index[i] >= 0 && index[j] >= 0) e.emplace_back(index[i], index[j]);
  }
  return from_edges(static_cast<int>(keep.size()), dim, std::move(e));
}

OrthogonalityGraph OrthogonalityGraph::without_vertex(int v) const {
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (i != v) keep.push_back(i);
  }
  return induced(keep);
}

OrthogonalityGraph build_graph(const VectorSet& set) {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(set.rays.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (exact_dot(set.rays[i], set.rays[j]).is_zero()) edges.emplace_back(i, j);
    }
  }
  return OrthogonalityGraph::from_edges(n, set.dim, std::move(edges));
}

namespace {

class Solver {
 public:
  Solver(const OrthogonalityGraph& g, const SearchOptions& opts) : g_(g), opts_(opts), value_(g.n, kUnset) {
    bases_of_.assign(g.n, {});
    for (std::size_t b = 0; b < g.bases.size(); ++b) {
      for (int v : g.bases[b]) bases_of_[v].push_back(b);
    }
    order_.resize(g.n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return g.adjacency[a].size() > g.adjacency[b].size(); });
  }

  ValuationResult run() {
    // Initial propagation: nothing is assigned, so only a degenerate basis
    // (impossible here) could force anything.
    search(0);
    result_.satisfiable = result_.stats.solutions > 0;
    return std::move(result_);
  }

 private:
  static constexpr std::int8_t kUnset = -1;

  bool done() const {
    if (result_.stats.solutions == 0) return false;
    if (!opts_.enumerate_all) return true;
    return opts_.max_solutions != 0 && result_.stats.solutions >= opts_.max_solutions;
  }

  // Assign and propagate; returns false on conflict. Assignments are pushed
  // onto the trail so the caller can undo them.
  bool assign(int v, std::int8_t val) {
    std::vector<std::pair<int, std::int8_t>> queue{{v, val}};
    while (!queue.empty()) {
      auto [u, x] = queue.back();
      queue.pop_back();
      if (value_[u] != kUnset) {
        if (value_[u] != x) return false;
        continue;
      }
      value_[u] = x;
      trail_.push_back(u);
      ++result_.stats.propagations;
      if (x == 1) {
        for (int w : g_.adjacency[u]) {
          if (value_[w] == 1) return false;
          if (value_[w] == kUnset) queue.emplace_back(w, 0);
        }
      }
      for (std::size_t b : bases_of_[u]) {
        int ones = 0;
        int unset = 0;
        int last_unset = -1;
        for (int w : g_.bases[b]) {
          if (value_[w] == 1) ++ones;
          if (value_[w] == kUnset) {
            ++unset;
            last_unset = w;
          }
        }
        if (ones > 1) return false;
        if (ones == 0 && unset == 0) return false;
        if (ones == 0 && unset == 1) queue.emplace_back(last_unset, 1);
      }
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = kUnset;
      trail_.pop_back();
    }
  }

  void search(std::size_t pos) {
    while (pos < order_.size() && value_[order_[pos]] != kUnset) ++pos;
    if (pos == order_.size()) {
      ++result_.stats.solutions;
      Valuation v(value_.begin(), value_.end());
      if (!result_.valuation) result_.valuation = v;
      if (opts_.enumerate_all && opts_.keep_solutions) result_.all.push_back(std::move(v));
      return;
    }
    const int v = order_[pos];
    for (std::int8_t val : {std::int8_t{1}, std::int8_t{0}}) {
      ++result_.stats.decisions;
      const std::size_t mark = trail_.size();
      if (assign(v, val)) {
        search(pos + 1);
      } else {
        ++result_.stats.conflicts;
      }
      undo_to(mark);
      if (done()) return;
    }
  }

  const OrthogonalityGraph& g_;
  SearchOptions opts_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::size_t>> bases_of_;
  std::vector<int> order_;
  std::vector<int> trail_;
  ValuationResult result_;
};

}  // namespace

ValuationResult find_valuation(const OrthogonalityGraph& graph, const SearchOptions& opts) {
  return Solver(graph, opts).run();
}

ValuationCheck verify_valuation(const OrthogonalityGraph& graph, const Valuation& v) {
  if (static_cast<int>(v.size()) != graph.n) {
    return {false, "(i) valuation has " + std::to_string(v.size()) + " entries for " + std::to_string(graph.n) +
                       " rays"};
  }
  for (int i = 0; i < graph.n; ++i) {
    if (v[i] != 0 && v[i] != 1) return {false, "(i) ray " + std::to_string(i) + " valued outside {0,1}"};
  }
  for (const auto& basis : graph.bases) {
    int ones = 0;
    for (int i : basis) ones += v[i];
    if (ones != 1) {
      std::string members;
      for (int i : basis) members += (members.empty() ? "" : ",") + std::to_string(i);
      return {false, "(ii) basis {" + members + "} has " + std::to_string(ones) + " ones"};
    }
  }
  for (const auto& [i, j] : graph.edges) {
    if (v[i] == 1 && v[j] == 1) {
      return {false, "(iii) orthogonal rays " + std::to_string(i) + " and " + std::to_string(j) + " both 1"};
    }
  }
  return {};
}

}  // namespace ontokit
