#include "ontokit/epi_bound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ontokit {

namespace {

constexpr double kOrthoTol = 1e-9;
constexpr double kPositive = 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) throw FragmentError(line, "bad number '" + tok + "'");
  return v;
}

CVector parse_amplitudes(const std::string& text, int dim, int line) {
  std::istringstream is(text);
  std::vector<Complex> vals;
  std::string tok;
  while (is >> tok) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) {
      vals.emplace_back(parse_real(tok, line), 0.0);
    } else {
      vals.emplace_back(parse_real(tok.substr(0, comma), line), parse_real(tok.substr(comma + 1), line));
    }
  }
  if (static_cast<int>(vals.size()) != dim) {
    throw FragmentError(line, "expected " + std::to_string(dim) + " amplitudes, got " + std::to_string(vals.size()));
  }
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = vals[i];
  if (v.norm() < 1e-12) throw FragmentError(line, "zero vector");
  return v;
}

// Per-state system: Born rows for every basis outcome plus normalization,
// over the atoms allowed for that state.
struct Block {
  std::vector<int> allowed;
  std::vector<Eigen::VectorXd> rows;  // over `allowed`
  std::vector<double> rhs;
};

double born_coefficient(const Fragment& f, const PureState& phi, const PureState& psi) {
  const double p = born_probability(phi, psi);
  return f.exact ? snap_rational(p) : p;
}

Block state_block(const Fragment& f, const std::vector<Atom>& atoms, int i) {
  Block b;
  const int v = f.vector_index(f.states[i]);
  for (int l = 0; l < static_cast<int>(atoms.size()); ++l) {
    if (v < 0 || atoms[l].values[v] == 1) b.allowed.push_back(l);
  }
  const int n = static_cast<int>(b.allowed.size());
  for (std::size_t bi = 0; bi < f.bases.size(); ++bi) {
    for (int k = 0; k < f.dim; ++k) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      for (int c = 0; c < n; ++c) {
        if (atoms[b.allowed[c]].outcome[bi] == k) row(c) = 1.0;
      }
      b.rows.push_back(row);
      b.rhs.push_back(born_coefficient(f, f.bases[bi][k], f.states[i]));
    }
  }
  b.rows.push_back(Eigen::VectorXd::Ones(n));
  b.rhs.push_back(1.0);
  return b;
}

LinearProgram block_lp(const Block& b) {
  LinearProgram lp(static_cast<int>(b.allowed.size()));
  for (std::size_t r = 0; r < b.rows.size(); ++r) lp.add_eq(b.rows[r], b.rhs[r]);
  return lp;
}

InfeasibilityCertificate certify(const std::string& reason, int state, const LinearProgram& lp, const LpResult& res) {
  InfeasibilityCertificate c;
  c.reason = reason;
  c.state = state;
  c.system = lp;
  c.y = res.certificate;
  c.check = verify_farkas(lp, c.y);
  return c;
}

InfeasibilityCertificate empty_atoms_certificate() {
  // With no variables the normalization row reads 0 = 1; y = -1 proves it.
  InfeasibilityCertificate c;
  c.reason = "empty-atoms";
  c.system = LinearProgram(0);
  c.system.add_eq(Eigen::VectorXd(0), 1.0);
  c.y.y_ub = Eigen::VectorXd(0);
  c.y.y_eq = Eigen::VectorXd::Constant(1, -1.0);
  c.check = verify_farkas(c.system, c.y);
  return c;
}

// Variables in [begin, end) that are positive in some feasible point of lp,
// plus the average of the feasible points found, which is positive on all of
// them.
struct SupportScan {
  std::vector<bool> possible;
  Eigen::VectorXd average;
};

SupportScan scan_support(const LinearProgram& lp, const Eigen::VectorXd& feasible, int begin, int end) {
  SupportScan s;
  s.possible.assign(lp.n_vars(), false);
  Eigen::VectorXd sum = feasible;
  int count = 1;
  for (int j = 0; j < lp.n_vars(); ++j) s.possible[j] = feasible(j) > kPositive;
  for (int j = begin; j < end; ++j) {
    if (s.possible[j]) continue;
    LinearProgram probe = lp;
    probe.objective = Eigen::VectorXd::Zero(lp.n_vars());
    probe.objective(j) = 1.0;
    const LpResult r = simplex_solve(probe);
    if (!r.optimal() || r.value <= kPositive) continue;
    sum += r.x;
    ++count;
    for (int k = 0; k < lp.n_vars(); ++k) {
      if (r.x(k) > kPositive) s.possible[k] = true;
    }
  }
  s.average = sum / count;
  return s;
}

struct PerState {
  std::vector<Block> blocks;
  /// Possible support of each state's distribution, as atom indices.
  std::vector<std::vector<int>> support;
  std::vector<Eigen::VectorXd> mu;
  std::optional<InfeasibilityCertificate> certificate;
};

PerState solve_states(const Fragment& f, const std::vector<Atom>& atoms) {
  PerState ps;
  for (int i = 0; i < static_cast<int>(f.states.size()); ++i) {
    Block b = state_block(f, atoms, i);
    const LinearProgram lp = block_lp(b);
    const LpResult r = simplex_solve(lp);
    if (!r.optimal()) {
      ps.certificate = certify("born", i, lp, r);
      return ps;
    }
    const int n = static_cast<int>(b.allowed.size());
    const SupportScan scan = scan_support(lp, r.x, 0, n);
    std::vector<int> supp;
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<int>(atoms.size()));
    for (int c = 0; c < n; ++c) {
      mu(b.allowed[c]) = scan.average(c);
      if (scan.possible[c]) supp.push_back(b.allowed[c]);
    }
    ps.blocks.push_back(std::move(b));
    ps.support.push_back(std::move(supp));
    ps.mu.push_back(std::move(mu));
  }
  return ps;
}

struct Pair {
  int phi, psi;
  double born;
};

std::vector<Pair> overlap_pairs(const Fragment& f) {
  std::vector<Pair> out;
  const int n = static_cast<int>(f.states.size());
  for (int j = 0; j < n; ++j) {
    if (f.vector_index(f.states[j]) < 0) continue;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double p = born_coefficient(f, f.states[j], f.states[i]);
      if (p > 1e-12) out.push_back({j, i, p});
    }
  }
  return out;
}

// Joint LP over all state blocks plus the uniform overlap variable t (last).
struct Joint {
  LinearProgram lp;
  std::vector<int> offset;
  int t = 0;
};

Joint joint_lp(const PerState& ps, const std::vector<Pair>& pairs, const std::vector<std::vector<int>>& lambda,
               bool fix_t) {
  Joint j;
  int n = 0;
  for (const auto& b : ps.blocks) {
    j.offset.push_back(n);
    n += static_cast<int>(b.allowed.size());
  }
  j.t = n;
  j.lp = LinearProgram(n + 1);
  j.lp.objective(j.t) = 1.0;
  for (std::size_t i = 0; i < ps.blocks.size(); ++i) {
    const auto& b = ps.blocks[i];
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
      row.segment(j.offset[i], b.allowed.size()) = b.rows[r];
      j.lp.add_eq(row, b.rhs[r]);
    }
  }
  for (const auto& p : pairs) {
    // t * born - sum_{l in Lambda_phi} mu_psi(l) <= 0
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
    const auto& b = ps.blocks[p.psi];
    for (std::size_t c = 0; c < b.allowed.size(); ++c) {
      const auto& lam = lambda[p.phi];
      if (std::binary_search(lam.begin(), lam.end(), b.allowed[c])) row(j.offset[p.psi] + c) = -1.0;
    }
    row(j.t) = p.born;
    j.lp.add_le(row, 0.0);
  }
  Eigen::VectorXd t_row = Eigen::VectorXd::Zero(n + 1);
  t_row(j.t) = 1.0;
  if (fix_t) {
    j.lp.add_eq(t_row, 1.0);
  } else {
    j.lp.add_le(t_row, 1.0);
  }
  return j;
}

std::vector<Eigen::VectorXd> unpack(const PerState& ps, const Joint& j, const Eigen::VectorXd& x, int n_atoms) {
  std::vector<Eigen::VectorXd> mu;
  for (std::size_t i = 0; i < ps.blocks.size(); ++i) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n_atoms);
    const auto& b = ps.blocks[i];
    for (std::size_t c = 0; c < b.allowed.size(); ++c) m(b.allowed[c]) = x(j.offset[i] + c);
    mu.push_back(m);
  }
  return mu;
}

double residual(const Fragment& f, const std::vector<Atom>& atoms, const std::vector<Eigen::VectorXd>& mu) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    worst = std::max(worst, std::max(0.0, -mu[i].minCoeff()));
    const int v = f.vector_index(f.states[i]);
    for (std::size_t l = 0; l < atoms.size(); ++l) {
      if (v >= 0 && atoms[l].values[v] != 1) worst = std::max(worst, std::abs(mu[i](l)));
    }
    for (std::size_t b = 0; b < f.bases.size(); ++b) {
      for (int k = 0; k < f.dim; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < atoms.size(); ++l) {
          if (atoms[l].outcome[b] == k) s += mu[i](l);
        }
        worst = std::max(worst, std::abs(s - born_coefficient(f, f.bases[b][k], f.states[i])));
      }
    }
  }
  return worst;
}

std::vector<int> positive_atoms(const Eigen::VectorXd& mu) {
  std::vector<int> out;
  for (int l = 0; l < mu.size(); ++l) {
    if (mu(l) > kPositive) out.push_back(l);
  }
  return out;
}

}  // namespace

Fragment Fragment::build(std::string name, int dim, std::vector<PureState> states,
                         std::vector<std::vector<PureState>> bases, bool exact) {
  if (dim < 2) throw FragmentError(0, "dim must be >= 2");
  if (bases.empty()) throw FragmentError(0, "fragment has no bases");
  Fragment f;
  f.name = std::move(name);
  f.dim = dim;
  f.exact = exact;
  for (const auto& s : states) {
    if (s.dim() != dim) throw FragmentError(0, "state dimension differs from dim");
  }
  for (std::size_t b = 0; b < bases.size(); ++b) {
    if (static_cast<int>(bases[b].size()) != dim) {
      throw FragmentError(0, "basis " + std::to_string(b) + " has " + std::to_string(bases[b].size()) +
                                 " vectors, expected " + std::to_string(dim));
    }
    for (const auto& v : bases[b]) {
      if (v.dim() != dim) throw FragmentError(0, "basis vector dimension differs from dim");
    }
    if (orthonormality_defect(bases[b]) > kAlgebraTol) {
      throw FragmentError(0, "basis " + std::to_string(b) + " is not orthonormal within 1e-12");
    }
    std::vector<int> idx;
    for (const auto& v : bases[b]) {
      int k = find_in_basis(f.vectors, v);
      if (k < 0) {
        k = static_cast<int>(f.vectors.size());
        f.vectors.push_back(v);
      }
      idx.push_back(k);
    }
    f.members.push_back(std::move(idx));
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t b = 0; b < bases.size(); ++b) {
      const bool seen = std::any_of(bases[b].begin(), bases[b].end(),
                                    [&](const PureState& v) { return born_probability(v, states[i]) > 1e-12; });
      if (!seen) throw FragmentError(0, "state " + std::to_string(i) + " is orthogonal to all of basis " +
                                            std::to_string(b));
    }
  }
  f.states = std::move(states);
  f.bases = std::move(bases);
  return f;
}

int Fragment::vector_index(const PureState& s) const { return find_in_basis(vectors, s); }

Fragment parse_fragment(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  int dim = 0;
  bool exact = false;
  std::vector<PureState> states;
  std::vector<std::vector<PureState>> bases;
  int pending = 0;  // vectors still expected in the open basis block
  int block_line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    if (pending > 0) {
      bases.back().push_back(PureState::normalized(parse_amplitudes(s, dim, line)));
      --pending;
      continue;
    }
    if (s.rfind("dim=", 0) == 0) {
      if (dim != 0) throw FragmentError(line, "duplicate dim header");
      dim = static_cast<int>(parse_real(trim(s.substr(4)), line));
      if (dim < 2) throw FragmentError(line, "dim must be >= 2");
    } else if (s == "exact") {
      exact = true;
    } else if (s.rfind("state:", 0) == 0) {
      if (dim == 0) throw FragmentError(line, "state before dim header");
      states.push_back(PureState::normalized(parse_amplitudes(s.substr(6), dim, line)));
    } else if (s.rfind("basis:", 0) == 0) {
      if (dim == 0) throw FragmentError(line, "basis before dim header");
      if (!trim(s.substr(6)).empty()) throw FragmentError(line, "basis vectors go on the following lines");
      bases.emplace_back();
      pending = dim;
      block_line = line;
    } else {
      throw FragmentError(line, "unrecognized line '" + s + "'");
    }
  }
  if (pending > 0) throw FragmentError(block_line, "basis block is missing vectors");
  if (dim == 0) throw FragmentError(0, "missing dim header");
  if (states.empty()) throw FragmentError(0, "fragment has no states");
  return Fragment::build(name, dim, std::move(states), std::move(bases), exact);
}

Fragment load_fragment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FragmentError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fragment(ss.str(), path.stem().string());
}

OrthogonalityGraph fragment_graph(const Fragment& f) {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(f.vectors.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(f.vectors[i].inner(f.vectors[j])) < kOrthoTol) edges.emplace_back(i, j);
    }
  }
  return OrthogonalityGraph::from_edges(n, f.dim, std::move(edges));
}

std::vector<Atom> enumerate_atoms(const Fragment& f) {
  const OrthogonalityGraph g = fragment_graph(f);
  SearchOptions opts;
  opts.enumerate_all = true;
  const ValuationResult r = find_valuation(g, opts);
  std::vector<Atom> atoms;
  for (const auto& v : r.all) {
    Atom a;
    a.values = v;
    for (const auto& m : f.members) {
      int k = -1;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (v[m[j]] == 1) k = static_cast<int>(j);
      }
      a.outcome.push_back(k);
    }
    atoms.push_back(std::move(a));
  }
  return atoms;
}

double snap_rational(double x) {
  for (long q = 1; q <= 10000; ++q) {
    const double p = std::round(x * static_cast<double>(q));
    const double r = p / static_cast<double>(q);
    if (std::abs(r - x) <= 1e-12) return r;
  }
  return x;
}

FeasibilityResult feasibility_max_epistemic(const Fragment& f) {
  FeasibilityResult out;
  out.atoms = enumerate_atoms(f);
  if (out.atoms.empty()) {
    out.certificate = empty_atoms_certificate();
    out.note = "no noncontextual deterministic assignment exists on the fragment's vectors";
    return out;
  }
  PerState ps = solve_states(f, out.atoms);
  if (ps.certificate) {
    out.certificate = ps.certificate;
    out.note = "Born statistics of a state cannot be reproduced inside its core";
    return out;
  }
  const auto pairs = overlap_pairs(f);
  std::vector<std::vector<int>> lambda = ps.support;
  const int n_atoms = static_cast<int>(out.atoms.size());
  // Shrink the candidate supports until they are the supports the joint
  // solution actually realizes; any exact f = 1 model survives every round.
  for (;;) {
    const Joint j = joint_lp(ps, pairs, lambda, true);
    const LpResult r = simplex_solve(j.lp);
    if (!r.optimal()) {
      out.certificate = certify("overlap", -1, j.lp, r);
      out.note = "no model reaches f = 1 on every prepared pair";
      return out;
    }
    const SupportScan scan = scan_support(j.lp, r.x, 0, j.t);
    out.mu = unpack(ps, j, scan.average, n_atoms);
    std::vector<std::vector<int>> next;
    for (const auto& m : out.mu) next.push_back(positive_atoms(m));
    if (next == lambda) break;
    lambda = std::move(next);
  }
  out.feasible = true;
  out.residual = residual(f, out.atoms, out.mu);
  return out;
}

OverlapBound max_overlap_fraction(const Fragment& f) {
  OverlapBound out;
  out.atoms = enumerate_atoms(f);
  if (out.atoms.empty()) {
    out.status = "undefined-by-emptiness";
    out.certificate = empty_atoms_certificate();
    return out;
  }
  PerState ps = solve_states(f, out.atoms);
  if (ps.certificate) {
    out.status = "infeasible";
    out.certificate = ps.certificate;
    return out;
  }
  const auto pairs = overlap_pairs(f);
  const int n_atoms = static_cast<int>(out.atoms.size());
  if (pairs.empty()) {
    out.status = "vacuous";
    out.f_star = 1.0;
    out.mu = ps.mu;
    return out;
  }
  const Joint j = joint_lp(ps, pairs, ps.support, false);
  const LpResult r = simplex_solve(j.lp);
  if (!r.optimal()) {
    out.status = "infeasible";
    out.certificate = certify("overlap", -1, j.lp, r);
    return out;
  }
  out.status = "optimal";
  out.f_star = r.value;
  out.mu = unpack(ps, j, r.x, n_atoms);
  for (const auto& p : pairs) {
    double mass = 0.0;
    for (int l : ps.support[p.phi]) mass += out.mu[p.psi](l);
    out.pairs.push_back({p.phi, p.psi, p.born, mass / p.born});
  }
  return out;
}

OntologicalModel finite_model(const Fragment& f, const std::vector<Atom>& atoms,
                              const std::vector<Eigen::VectorXd>& mu) {
  if (mu.size() != f.states.size()) throw std::invalid_argument("one distribution per fragment state expected");
  OntologicalModel m;
  m.name = "finite:" + f.name;
  m.display_name = "finite";
  m.type = "atoms";
  m.dim = f.dim;
  m.space = OnticSpace::atoms(static_cast<int>(atoms.size()));
  m.prepare = [f, mu, space = m.space](const PureState& psi, const PrepContext&) {
    const int i = find_in_basis(f.states, psi);
    if (i < 0) throw std::invalid_argument("state is not prepared by the fragment");
    EpistemicState::PointMasses pm;
    for (int l = 0; l < mu[i].size(); ++l) {
      if (mu[i](l) > 0.0) pm.atoms.push_back({mu[i](l), AtomPoint{l}});
    }
    return EpistemicState(space, std::move(pm));
  };
  auto value = [f, atoms](const PureState& phi, const OnticPoint& p) -> double {
    const int v = f.vector_index(phi);
    if (v < 0) throw std::invalid_argument("outcome is not a fragment vector");
    return atoms.at(std::get<AtomPoint>(p).index).values[v];
  };
  m.respond.evaluate = [value](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return value(phi, p);
  };
  m.respond.core = [value](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return value(phi, p) == 1.0;
  };
  m.respond.support = m.respond.core;
  m.declared = {.reciprocal = true,
                .outcome_deterministic = true,
                .measurement_contextual = false,
                .preparation_contextual = false,
                .psi_dependent_response = false};
  return m;
}

}  // namespace ontokit
