#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ontokit/classify.hpp"
#include "ontokit/epi_bound.hpp"
#include "ontokit/ks_valuation.hpp"
#include "ontokit/report.hpp"
#include "ontokit/zoo.hpp"

namespace ontokit::cli {

namespace {

struct Globals {
  unsigned long long seed = kDefaultSeed;
  std::string format = "text";
  std::string output;
};

struct Input {
  std::string path;
  std::string sha256;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Collects one command's output and writes it to --output or stdout.
class Emitter {
 public:
  Emitter(const Globals& g, std::string command, std::ostream& out) : g_(g), command_(std::move(command)), out_(out) {}

  void engine(const std::string& spec) { engine_ = spec; }
  void input(const std::string& path) { inputs_.push_back({path, sha256_file(path)}); }

  void json(const Json& result) { json_ = result; }
  std::ostringstream& text() { return text_; }
  std::ostringstream& csv() { return csv_; }

  void flush() {
    std::string body;
    if (g_.format == "json") {
      Json env = {{"tool", "ontokit"}, {"version", ONTOKIT_VERSION}, {"command", command_}, {"seed", g_.seed}};
      env["engine"] = engine_.empty() ? Json(nullptr) : Json(engine_);
      Json in = Json::array();
      for (const auto& i : inputs_) in.push_back({{"path", i.path}, {"sha256", i.sha256}});
      env["inputs"] = in;
      env["result"] = json_;
      body = env.dump(2) + "\n";
    } else if (g_.format == "csv") {
      body = csv_.str();
    } else {
      std::ostringstream head;
      head << "# ontokit " << ONTOKIT_VERSION << ' ' << command_ << " seed=" << g_.seed;
      if (!engine_.empty()) head << " engine=" << engine_;
      for (const auto& i : inputs_) head << " input=" << i.path << " sha256=" << i.sha256;
      body = head.str() + "\n" + text_.str();
    }
    if (g_.output.empty()) {
      out_ << body;
    } else {
      std::ofstream f(g_.output, std::ios::binary);
      if (!f) throw UsageError("cannot write " + g_.output);
      f << body;
    }
  }

 private:
  const Globals& g_;
  std::string command_;
  std::ostream& out_;
  std::string engine_;
  std::vector<Input> inputs_;
  Json json_;
  std::ostringstream text_;
  std::ostringstream csv_;
};

const char* yn(bool b) { return b ? "yes" : "no"; }

IntegrationEngine engine_for(const OntologicalModel& m, const std::string& spec, std::uint64_t seed) {
  return spec.empty() ? default_engine(m.space, seed) : IntegrationEngine::parse(spec, seed);
}

bool parse_yes_no(const std::string& s) {
  if (s == "yes" || s == "y" || s == "1") return true;
  if (s == "no" || s == "n" || s == "0") return false;
  throw UsageError("expected yes/no, got '" + s + "'");
}

// "name=yes,no,no" -> (name, triple)
std::pair<std::string, Triple> parse_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw UsageError("expected model=r,d,c in '" + s + "'");
  std::vector<std::string> parts;
  std::stringstream ss(s.substr(eq + 1));
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("expected three yes/no values in '" + s + "'");
  return {s.substr(0, eq), Triple{parse_yes_no(parts[0]), parse_yes_no(parts[1]), parse_yes_no(parts[2])}};
}

int cmd_verify(const Globals& g, const std::string& model_name, const std::string& engine_spec, int pairs,
               std::ostream& out) {
  if (pairs < 1) throw UsageError("--pairs must be positive");
  const OntologicalModel m = make_model(model_name);
  const IntegrationEngine eng = engine_for(m, engine_spec, g.seed);
  std::vector<PureState> states;
  std::vector<std::vector<PureState>> bases;
  for (int i = 0; i < pairs; ++i) {
    CounterRng rng(g.seed, 41, static_cast<std::uint64_t>(i));
    states.push_back(PureState::random(m.dim, rng));
    bases.push_back(random_basis(m.dim, rng));
  }
  const BornReport rep = verify_born(m, states, bases, eng);
  Emitter e(g, "verify", out);
  e.engine(eng.spec());
  e.json(to_json(rep));
  e.csv() << "pair,outcome,predicted,born,deviation,std_error,ok\n";
  for (const auto& r : rep.rows) {
    e.csv() << r.pair << ',' << r.outcome << ',' << round_sig(r.predicted) << ',' << round_sig(r.born) << ','
            << round_sig(r.deviation) << ',' << round_sig(r.std_error) << ',' << (r.ok ? 1 : 0) << '\n';
  }
  e.text() << "model " << m.name << ": " << pairs << " pairs, max deviation " << round_sig(rep.max_deviation);
  if (eng.kind == IntegrationEngine::Kind::MonteCarlo) e.text() << " (max " << round_sig(rep.max_sigma, 4) << " sigma)";
  e.text() << "\n" << (rep.pass ? "PASS" : "FAIL") << "\n";
  e.flush();
  return rep.pass ? kExitPass : kExitNegative;
}

int cmd_classify(const Globals& g, std::vector<std::string> models, const std::string& engine_spec,
                 std::uint64_t trials, bool max_epistemic, int pairs, std::ostream& out) {
  if (models.empty()) models = model_names();
  Emitter e(g, "classify", out);
  Json all = Json::array();
  e.csv() << "model,predicate,status,n_trials\n";
  bool consistent = true;
  for (const auto& name : models) {
    const OntologicalModel m = make_model(name);
    Budget b;
    b.trials = trials;
    b.seed = g.seed;
    b.engine = engine_for(m, engine_spec, g.seed);
    const ClassificationReport rep = classify(m, b);
    Json j = to_json(rep);
    e.text() << m.name << " (" << m.display_name << ", " << m.type << ")\n";
    for (const auto& [pred, r] : rep.predicates) {
      e.csv() << m.name << ',' << pred << ',' << to_string(r.status) << ',' << r.n_trials << '\n';
      e.text() << "  " << pred << ": " << to_string(r.status);
      if (r.witness) e.text() << "  [" << r.witness->detail << "]";
      e.text() << "\n";
    }
    e.text() << "  verdict: reciprocity " << yn(rep.reciprocal()) << ", determinism " << yn(rep.deterministic())
             << ", contextual " << yn(rep.measurement_contextual()) << "\n";
    consistent = consistent && rep.reciprocal() == m.declared.reciprocal &&
                 rep.deterministic() == m.declared.outcome_deterministic &&
                 rep.measurement_contextual() == m.declared.measurement_contextual;
    if (max_epistemic) {
      const auto me = is_maximally_epistemic(m, static_cast<std::uint64_t>(pairs), *b.engine, g.seed, trials);
      j["maximal_psi_epistemicity"] = to_json(me);
      e.text() << "  maximal psi-epistemicity: " << to_string(me.result.status) << " (min f "
               << round_sig(me.min_f, 6) << " over " << me.pairs << " pairs)\n";
      if (!me.note.empty()) e.text() << "  " << me.note << "\n";
      consistent = consistent && me.equivalence_consistent && me.corollary_consistent;
    }
    all.push_back(j);
  }
  e.json(all);
  e.flush();
  return consistent ? kExitPass : kExitNegative;
}

int cmd_table(const Globals& g, std::uint64_t trials, const std::vector<std::string>& declare,
              const std::vector<std::string>& expect, std::ostream& out) {
  std::vector<TableEntry> rows = reference_table();
  std::map<int, OntologicalModel> models;
  auto row_for = [&](const std::string& name) -> TableEntry& {
    for (auto& r : rows) {
      if (!r.model_name.empty() && (r.model_name == name || make_model(name).name == r.model_name)) return r;
    }
    throw UsageError("model '" + name + "' has no table row");
  };
  for (const auto& d : declare) {
    const auto [name, t] = parse_assignment(d);
    TableEntry& r = row_for(name);
    OntologicalModel m = make_model(r.model_name);
    m.declared.reciprocal = t.reciprocal;
    m.declared.outcome_deterministic = t.deterministic;
    m.declared.measurement_contextual = t.contextual;
    models.insert_or_assign(r.row, std::move(m));
  }
  for (const auto& x : expect) {
    const auto [name, t] = parse_assignment(x);
    TableEntry& r = row_for(name);
    r.reciprocal = t.reciprocal;
    r.deterministic = t.deterministic;
    r.contextual = t.contextual;
  }
  Budget b;
  b.trials = trials;
  b.seed = g.seed;
  const TableReport rep = build_table(rows, models, b);
  Emitter e(g, "table", out);
  e.json(to_json(rep));
  e.csv() << table_csv(rep);
  e.text() << table_text(rep) << (rep.pass ? "PASS" : "FAIL: measured verdicts differ") << "\n";
  e.flush();
  return rep.pass ? kExitPass : kExitNegative;
}

int cmd_ksval(const Globals& g, const std::string& path, bool all, std::uint64_t max_solutions, std::ostream& out) {
  const VectorSet set = load_vector_set(path);
  const OrthogonalityGraph graph = build_graph(set);
  SearchOptions opts;
  opts.enumerate_all = all;
  opts.max_solutions = max_solutions;
  opts.keep_solutions = false;
  const ValuationResult r = find_valuation(graph, opts);
  bool checked = true;
  std::string violation;
  if (r.valuation) {
    const ValuationCheck c = verify_valuation(graph, *r.valuation);
    checked = c.ok;
    violation = c.violation;
  }
  Emitter e(g, "ksval", out);
  e.input(path);
  Json j = to_json(r, graph);
  if (r.valuation) {
    Json labelled = Json::object();
    for (std::size_t i = 0; i < set.rays.size(); ++i) labelled[set.rays[i].label] = (*r.valuation)[i];
    j["valuation"] = labelled;
    j["checker"] = {{"ok", checked}, {"violation", violation}};
  }
  e.json(j);
  e.csv() << "label,value\n";
  if (r.valuation) {
    for (std::size_t i = 0; i < set.rays.size(); ++i) e.csv() << set.rays[i].label << ',' << int((*r.valuation)[i]) << '\n';
  }
  e.text() << set.rays.size() << " rays, " << graph.edges.size() << " orthogonal pairs, " << graph.bases.size()
           << " complete bases, " << graph.maximal_orthogonal_sets.size() << " maximal orthogonal sets\n";
  e.text() << (r.satisfiable ? "SAT" : "UNSAT") << " (decisions " << r.stats.decisions << ", conflicts "
           << r.stats.conflicts << ")\n";
  if (all) e.text() << "valuations: " << r.stats.solutions << "\n";
  if (r.valuation) {
    e.text() << "ones:";
    for (std::size_t i = 0; i < set.rays.size(); ++i) {
      if ((*r.valuation)[i]) e.text() << ' ' << set.rays[i].label;
    }
    e.text() << "\nchecker: " << (checked ? "ok" : "FAILED " + violation) << "\n";
  }
  e.flush();
  if (!checked) return kExitNegative;
  return r.satisfiable ? kExitPass : kExitNegative;
}

int cmd_bound(const Globals& g, const std::string& path, std::ostream& out) {
  const Fragment f = load_fragment(path);
  const FeasibilityResult feas = feasibility_max_epistemic(f);
  const OverlapBound bound = max_overlap_fraction(f);
  bool born_ok = true;
  if (feas.feasible) {
    const OntologicalModel m = finite_model(f, feas.atoms, feas.mu);
    for (const auto& s : f.states) {
      born_ok = born_ok && verify_born(m, {s}, f.bases, IntegrationEngine::closed_form(1e-9)).pass;
    }
  }
  Emitter e(g, "bound", out);
  e.input(path);
  Json j = {{"fragment", f.name}, {"n_atoms", bound.atoms.size()}, {"feasible", feas.feasible}};
  j["f_star"] = bound.f_star ? Json(round_sig(*bound.f_star)) : Json(nullptr);
  j["caveat"] = bound.caveat;
  j["certificate"] = feas.certificate ? to_json(*feas.certificate) : Json(nullptr);
  j["feasibility"] = to_json(feas);
  j["overlap"] = to_json(bound);
  if (feas.feasible) j["born_reverified"] = born_ok;
  e.json(j);
  e.csv() << "phi,psi,born,f\n";
  for (const auto& p : bound.pairs) {
    e.csv() << p.phi << ',' << p.psi << ',' << round_sig(p.born) << ',' << round_sig(p.f) << '\n';
  }
  e.text() << "fragment " << f.name << ": d=" << f.dim << ", " << f.states.size() << " states, " << f.bases.size()
           << " bases, " << f.vectors.size() << " vectors, " << bound.atoms.size() << " atoms\n";
  e.text() << "f = 1 model: " << (feas.feasible ? "feasible" : "infeasible");
  if (feas.certificate) {
    e.text() << " (" << feas.certificate->reason << " certificate "
             << (feas.certificate->check.ok ? "verified" : "NOT verified") << ")";
  }
  e.text() << "\nf* = ";
  if (bound.f_star) {
    e.text() << round_sig(*bound.f_star);
  } else {
    e.text() << "undefined (" << bound.status << ")";
  }
  e.text() << "  [" << bound.caveat << "]\n";
  e.flush();
  if (feas.feasible && !born_ok) return kExitNegative;
  return feas.feasible ? kExitPass : kExitNegative;
}

int cmd_prepctx(const Globals& g, const std::string& model_name, const std::string& rho, const std::string& ctx,
                const std::string& engine_spec, std::ostream& out) {
  const OntologicalModel m = make_model(model_name);
  if (rho != "unpolarized" && rho != "maximally-mixed") {
    throw UsageError("--rho supports 'unpolarized' (I/d) only");
  }
  const auto comma = ctx.find(',');
  if (comma == std::string::npos) throw UsageError("--ctx expects two decompositions, e.g. z,x");
  PrepContext a, b;
  try {
    a = named_mixed_context(m.dim, ctx.substr(0, comma));
    b = named_mixed_context(m.dim, ctx.substr(comma + 1));
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  const IntegrationEngine eng = engine_for(m, engine_spec, g.seed);
  const PrepDistance d = prep_context_distance(m, DensityOperator::maximally_mixed(m.dim), a, b, eng);
  Emitter e(g, "prepctx", out);
  e.engine(eng.spec());
  Json j = to_json(d);
  j["model"] = m.name;
  j["contexts"] = {a.label, b.label};
  e.json(j);
  e.csv() << "model,ctx_a,ctx_b,tv,std_error,verdict\n"
          << m.name << ',' << a.label << ',' << b.label << ',' << round_sig(d.tv.value) << ','
          << round_sig(d.tv.std_error) << ',' << to_string(d.verdict) << '\n';
  e.text() << m.name << ": TV(" << a.label << ", " << b.label << ") = " << round_sig(d.tv.value) << " -> "
           << to_string(d.verdict) << "\n";
  e.flush();
  return d.verdict == PrepVerdict::Contextual ? kExitPass : kExitNegative;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification and classification of ontological models of quantum states", "ontokit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(ONTOKIT_VERSION));
  app.set_config("--config", "", "Read options from a config file (key = value, [command] sections)");

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->envname(kSeedEnv)->capture_default_str();
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("-o,--output", g.output, "Write the report to a file instead of stdout");

  std::string model, engine, rho = "unpolarized", ctx = "z,x", path;
  std::vector<std::string> models, declare, expect;
  int pairs = 20;
  int max_pairs = 100;
  std::uint64_t trials = 2000;
  std::uint64_t max_solutions = 0;
  bool all = false;
  bool max_epistemic = false;

  auto* verify = app.add_subcommand("verify", "Check that a model reproduces Born probabilities");
  verify->add_option("--model", model, "Model name (bb[:d], ks, bell2, ws[:d])")->required();
  verify->add_option("--engine", engine, "closed | quad[:level] | mc[:samples]");
  verify->add_option("--pairs", pairs, "Random (state, basis) pairs")->capture_default_str();

  auto* cls = app.add_subcommand("classify", "Classify models by randomized falsification");
  cls->add_option("--model", models, "Models to classify (default: all)");
  cls->add_option("--engine", engine, "closed | quad[:level] | mc[:samples]");
  cls->add_option("--trials", trials, "Trials per predicate")->capture_default_str();
  cls->add_flag("--max-epistemic", max_epistemic, "Also test maximal psi-epistemicity");
  cls->add_option("--pairs", max_pairs, "State pairs for --max-epistemic")->capture_default_str();

  auto* table = app.add_subcommand("table", "Reproduce the reference classification table");
  table->add_option("--trials", trials, "Trials per predicate")->capture_default_str();
  table->add_option("--declare", declare, "Override a model's declared properties: model=r,d,c");
  table->add_option("--expect", expect, "Override a row's expected properties: model=r,d,c");

  auto* ksval = app.add_subcommand("ksval", "Search for a 0/1 valuation of a vector set");
  ksval->add_option("file", path, "Vector-set file")->required();
  ksval->add_flag("--all", all, "Enumerate all valuations");
  ksval->add_option("--max-solutions", max_solutions, "Stop enumeration after this many (0: no limit)");

  auto* bound = app.add_subcommand("bound", "LP bounds on the overlap fraction for a fragment");
  bound->add_option("file", path, "Fragment file")->required();

  auto* prep = app.add_subcommand("prepctx", "Distance between two preparations of the same mixed state");
  prep->add_option("--model", model, "Model name")->required();
  prep->add_option("--rho", rho, "Density operator (unpolarized)")->capture_default_str();
  prep->add_option("--ctx", ctx, "Two decompositions: z,x,y (d=2) or z,fourier")->capture_default_str();
  prep->add_option("--engine", engine, "closed | quad[:level] | mc[:samples]");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(g, model, engine, pairs, out);
    if (*cls) return cmd_classify(g, models, engine, trials, max_epistemic, max_pairs, out);
    if (*table) return cmd_table(g, trials, declare, expect, out);
    if (*ksval) return cmd_ksval(g, path, all, max_solutions, out);
    if (*bound) return cmd_bound(g, path, out);
    if (*prep) return cmd_prepctx(g, model, rho, ctx, engine, out);
  } catch (const VectorSetError& e) {
    err << "ontokit: " << path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const FragmentError& e) {
    err << "ontokit: " << path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "ontokit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "ontokit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "ontokit: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ontokit::cli
