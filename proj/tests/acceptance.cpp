// End-to-end acceptance run: one line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ontokit/classify.hpp"
#include "ontokit/epi_bound.hpp"
#include "ontokit/ks_valuation.hpp"
#include "ontokit/report.hpp"
#include "ontokit/zoo.hpp"

using namespace ontokit;

namespace {

std::string data(const std::string& rel) { return std::string(ONTOKIT_DATA_DIR) + "/" + rel; }

// Collects failed checks for one criterion.
struct Checks {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void note(const std::string& s) { notes.push_back(s); }
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "ontokit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return code;
}

std::vector<std::pair<PureState, std::vector<PureState>>> random_pairs(int dim, int n, std::uint64_t seed) {
  std::vector<std::pair<PureState, std::vector<PureState>>> out;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(seed, 41, static_cast<std::uint64_t>(i));
    PureState psi = PureState::random(dim, rng);
    out.emplace_back(std::move(psi), random_basis(dim, rng));
  }
  return out;
}

BornReport born(const OntologicalModel& m, int pairs, const IntegrationEngine& eng) {
  std::vector<PureState> states;
  std::vector<std::vector<PureState>> bases;
  for (auto& [s, b] : random_pairs(m.dim, pairs, 1)) {
    states.push_back(s);
    bases.push_back(b);
  }
  return verify_born(m, states, bases, eng);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void born_reproduction(Checks& c) {
  const BornReport bb = born(make_bb(3), 100, IntegrationEngine::closed_form());
  c.require(bb.pass && bb.max_deviation == 0.0, "B-B closed-form deviation " + fmt(bb.max_deviation));
  const BornReport ks = born(make_ks(), 100, IntegrationEngine::quadrature(17));
  c.require(ks.pass && ks.max_deviation < 1e-6, "KS quadrature deviation " + fmt(ks.max_deviation));
  c.note("KS max deviation " + fmt(ks.max_deviation) + " over 100 pairs");
  for (const char* name : {"bell2", "ws:3"}) {
    const BornReport r = born(make_model(name), 20, IntegrationEngine::monte_carlo(1'000'000, 1));
    c.note(std::string(name) + " max " + fmt(r.max_sigma) + " sigma over 20 pairs, n = 1e6");
    c.require(r.pass && r.max_sigma < 3.0, std::string(name) + " max " + fmt(r.max_sigma) + " sigma");
  }
}

void certainty_and_support(Checks& c) {
  for (const auto& m : zoo()) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      CounterRng rng(1, 51, i);
      const PureState psi = PureState::random(m.dim, rng);
      const auto cert = check_quantum_certainty(m, psi, {}, {}, 10'000, i);
      const auto chain = check_support_chain(m, psi, 10'000, i);
      c.require(!cert.falsified(), m.name + " quantum certainty, state " + std::to_string(i));
      c.require(!chain.falsified(), m.name + " support chain, state " + std::to_string(i));
    }
  }
}

void table_reproduction(Checks& c) {
  const Budget budget;
  const TableReport t = build_table(reference_table(), {}, budget);
  const int want[4][4] = {{1, 1, 0, 0}, {2, 1, 1, 0}, {5, 0, 1, 0}, {7, 0, 1, 1}};
  for (const auto& w : want) {
    const auto& row = t.rows[static_cast<std::size_t>(w[0] - 1)];
    const bool ok = row.implemented && row.measured && row.measured->reciprocal == bool(w[1]) &&
                    row.measured->deterministic == bool(w[2]) && row.measured->contextual == bool(w[3]);
    c.require(ok, "row " + std::to_string(w[0]) + " " + row.diff);
  }
  c.require(t.pass, "table report did not pass");
  c.require(run_cli({"table"}) == cli::kExitPass, "`table` exit code");
}

void maximal_epistemicity(Checks& c) {
  const auto ks = is_maximally_epistemic(make_ks(), 100, IntegrationEngine::quadrature(17), 1);
  c.require(ks.result.status == Status::ConfirmedAnalytic, "KS not confirmed");
  c.require(std::abs(ks.min_f - 1.0) <= 1e-6, "KS min f " + fmt(ks.min_f));
  c.note("KS min f over 100 pairs: " + fmt(ks.min_f));
  const auto bb = is_maximally_epistemic(make_bb(3), 100, IntegrationEngine::closed_form(), 1);
  c.require(bb.result.falsified() && bb.result.witness && bb.result.witness->observed == 0.0,
            "B-B not falsified with an f = 0 witness");
  const auto ws = is_maximally_epistemic(make_ws(3), 100, IntegrationEngine::monte_carlo(20000, 1), 1);
  c.require(ws.result.falsified(), "W-S not falsified");
  for (const auto& m : zoo()) {
    const auto r = is_maximally_epistemic(m, 100, default_engine(m.space, 1), 1);
    c.require(r.equivalence_consistent, m.name + " equivalence check");
    c.require(r.corollary_consistent, m.name + " corollary check");
  }
}

void preparation_contextuality(Checks& c) {
  const auto [z, x] = standard_mixed_contexts(2);
  const auto rho = DensityOperator::maximally_mixed(2);
  c.require(mix(*z.decomposition).distance(rho) <= 1e-12, "z-mixture is not I/2");
  c.require(mix(*x.decomposition).distance(rho) <= 1e-12, "x-mixture is not I/2");
  const PrepDistance d = prep_context_distance(make_ks(), rho, z, x, IntegrationEngine::quadrature(17));
  c.require(d.tv.value > 0.1, "KS TV " + fmt(d.tv.value));
  c.note("KS TV(z, x) = " + fmt(d.tv.value));
}

void ks_valuation(Checks& c) {
  SearchOptions all;
  all.enumerate_all = true;
  for (const char* file : {"vectors/triad.vec", "vectors/two_triads.vec"}) {
    const auto g = build_graph(load_vector_set(data(file)));
    const auto r = find_valuation(g, all);
    c.require(r.satisfiable, std::string(file) + " should be SAT");
    for (const auto& v : r.all) c.require(verify_valuation(g, v).ok, std::string(file) + " checker rejected");
    if (std::string(file) == "vectors/triad.vec") c.require(r.all.size() == 3, "triad valuation count");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto peres = find_valuation(build_graph(load_vector_set(data("vectors/peres33.vec"))));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(!peres.satisfiable, "Peres-33 should be UNSAT");
  c.require(secs < 10.0, "Peres-33 search took " + fmt(secs) + " s");
  c.note("Peres-33 UNSAT in " + fmt(secs) + " s, " + std::to_string(peres.stats.decisions) + " decisions");
}

// A deterministic, noncontextual d = 3 model; the theorem check must reject it.
OntologicalModel deterministic_noncontextual_d3() {
  OntologicalModel m = make_bb(3);
  m.name = "fake:3";
  m.respond.evaluate = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return std::get<RayPoint>(p).ray.same_ray(phi) ? 1.0 : 0.0;
  };
  m.respond.core = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return std::get<RayPoint>(p).ray.same_ray(phi);
  };
  m.respond.support = m.respond.core;
  return m;
}

void ks_om_theorem(Checks& c) {
  const auto rep = ks_om_consistency(zoo());
  c.require(rep.pass && !rep.vacuous, "zoo fails the KS-OM check");
  auto with_fake = zoo();
  with_fake.push_back(deterministic_noncontextual_d3());
  c.require(!ks_om_consistency(with_fake).pass, "negative control passed");
}

void epi_bound(Checks& c) {
  auto born_ok = [](const Fragment& f, const std::vector<Atom>& atoms, const std::vector<Eigen::VectorXd>& mu) {
    const OntologicalModel m = finite_model(f, atoms, mu);
    bool ok = true;
    for (const auto& s : f.states) ok = ok && verify_born(m, {s}, f.bases, IntegrationEngine::closed_form(1e-9)).pass;
    return ok;
  };
  auto cert_ok = [](const FeasibilityResult& r) {
    return r.certificate && verify_farkas(r.certificate->system, r.certificate->y, 1e-9).ok;
  };

  const Fragment zx = load_fragment(data("fragments/d2_zx.frag"));
  const auto fz = feasibility_max_epistemic(zx);
  const auto bz = max_overlap_fraction(zx);
  c.require(fz.feasible, "d2_zx infeasible");
  c.require(bz.f_star && std::abs(*bz.f_star - 1.0) <= 1e-9, "d2_zx f* != 1");
  c.require(fz.feasible && born_ok(zx, fz.atoms, fz.mu), "d2_zx Born re-check");

  const Fragment unc = load_fragment(data("fragments/d3_uncolorable.frag"));
  const auto fu = feasibility_max_epistemic(unc);
  c.require(!fu.feasible && fu.atoms.empty(), "uncolorable fragment has atoms");
  c.require(cert_ok(fu), "uncolorable certificate");
  c.require(!find_valuation(fragment_graph(unc)).satisfiable, "uncolorable vectors SAT");

  const Fragment tri = load_fragment(data("fragments/d3_triads.frag"));
  const auto ft = feasibility_max_epistemic(tri);
  const auto bt = max_overlap_fraction(tri);
  c.require(!ft.feasible && cert_ok(ft), "d3_triads certificate");
  c.require(bt.f_star && *bt.f_star < 1.0, "d3_triads f* not below 1");
  c.require(bt.f_star && std::abs(*bt.f_star - 1.0 / 3.0) <= 1e-9, "d3_triads f* golden 1/3");
  c.require(bt.f_star && born_ok(tri, bt.atoms, bt.mu), "d3_triads optimum Born re-check");
  if (bt.f_star) c.note("d3_triads f* = " + fmt(*bt.f_star) + " over " + std::to_string(bt.atoms.size()) + " atoms");

  for (const char* file : {"fragments/single.frag", "fragments/d2_zxy.frag"}) {
    const Fragment f = load_fragment(data(file));
    const auto r = feasibility_max_epistemic(f);
    c.require(r.feasible ? born_ok(f, r.atoms, r.mu) : cert_ok(r), std::string(file) + " re-check");
  }
}

void determinism(Checks& c) {
  const std::vector<std::vector<std::string>> runs = {
      {"--format", "json", "classify"},
      {"--format", "json", "verify", "--model", "ws:3", "--engine", "mc:50000", "--pairs", "5"},
      {"--format", "json", "classify", "--model", "ks", "--max-epistemic"},
      {"--format", "json", "bound", data("fragments/d3_triads.frag")},
      {"--format", "json", "ksval", data("vectors/peres33.vec")},
      {"--format", "json", "table"},
  };
  for (const auto& args : runs) {
    std::string a, b;
    run_cli(args, &a);
    run_cli(args, &b);
    c.require(!a.empty() && a == b, "report differs between runs: " + args[2]);
  }
  std::size_t witnesses = 0;
  for (const auto& m : zoo()) {
    const auto rep = classify(m);
    for (const auto& [name, r] : rep.predicates) {
      if (!r.witness) continue;
      ++witnesses;
      const auto again = replay(m, *r.witness);
      c.require(again && again->observed == r.witness->observed, m.name + " " + name + " witness does not replay");
    }
  }
  c.require(witnesses > 0, "no witnesses to replay");
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Checks&)> run;
  double budget_s;  // 0: no runtime requirement
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Born reproduction", born_reproduction, 60},
      {2, "quantum certainty and support chain", certainty_and_support, 30},
      {3, "classification table", table_reproduction, 0},
      {4, "maximal psi-epistemicity", maximal_epistemicity, 0},
      {5, "preparation contextuality", preparation_contextuality, 0},
      {6, "KS valuation", ks_valuation, 0},
      {7, "KS-OM theorem consistency", ks_om_theorem, 0},
      {8, "overlap bounds", epi_bound, 60},
      {9, "determinism and replay", determinism, 0},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0 && secs >= cr.budget_s) c.failures.push_back("runtime " + fmt(secs) + " s over budget");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("criterion %d: %s  %s (%.2f s)\n", cr.id, ok ? "PASS" : "FAIL", cr.title, secs);
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    for (const auto& f : c.failures) std::printf("    failed: %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
