#include "ontokit/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace ontokit {

namespace {

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(round_sig(v(i)));
  return a;
}

Json estimate_json(const Estimate& e) { return {{"value", round_sig(e.value)}, {"std_error", round_sig(e.std_error)}}; }

const char* yes_no(bool b) { return b ? "yes" : "no"; }

Json triple_json(const Triple& t) {
  return {{"reciprocity", yes_no(t.reciprocal)},
          {"determinism", yes_no(t.deterministic)},
          {"contextual", yes_no(t.contextual)}};
}

Json atom_list(const std::vector<Atom>& atoms) {
  Json a = Json::array();
  for (const auto& atom : atoms) a.push_back(atom.outcome);
  return a;
}

Json mu_json(const std::vector<Eigen::VectorXd>& mu) {
  Json a = Json::array();
  for (const auto& m : mu) a.push_back(vec_json(m));
  return a;
}

}  // namespace

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

Json to_json(const PureState& s) {
  Json a = Json::array();
  for (int i = 0; i < s.dim(); ++i) a.push_back({round_sig(s[i].real()), round_sig(s[i].imag())});
  return a;
}

Json to_json(const Witness& w) {
  Json j = {{"predicate", w.predicate}, {"seed", w.seed}, {"stream", w.stream}, {"index", w.index}};
  if (!w.engine.empty()) {
    j["engine"] = w.engine;
    j["engine_seed"] = w.engine_seed;
  }
  if (!w.psi.empty()) j["psi"] = w.psi;
  if (!w.phi.empty()) j["phi"] = w.phi;
  if (!w.lambda.empty()) j["lambda"] = w.lambda;
  if (!w.contexts.empty()) j["contexts"] = w.contexts;
  j["observed"] = round_sig(w.observed);
  j["expected"] = round_sig(w.expected);
  if (!w.detail.empty()) j["detail"] = w.detail;
  if (!w.inputs.empty()) {
    Json in = Json::array();
    for (const auto& s : w.inputs) in.push_back(to_json(s));
    j["inputs"] = in;
  }
  return j;
}

Json to_json(const PredicateResult& r) {
  Json j = {{"status", to_string(r.status)}, {"n_trials", r.n_trials}, {"seed", r.seed}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const ClassificationReport& r) {
  Json preds = Json::object();
  for (const auto& [name, p] : r.predicates) preds[name] = to_json(p);
  return {{"model", r.model},
          {"dim", r.dim},
          {"seed", r.seed},
          {"n_trials", r.n_trials},
          {"engine", r.engine},
          {"predicates", preds},
          {"verdict",
           {{"reciprocity", yes_no(r.reciprocal())},
            {"determinism", yes_no(r.deterministic())},
            {"contextual", yes_no(r.measurement_contextual())},
            {"preparation_contextual", yes_no(r.preparation_contextual())},
            {"deficient", yes_no(r.deficient())}}}};
}

Json to_json(const BornReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"pair", row.pair},
                    {"outcome", row.outcome},
                    {"predicted", round_sig(row.predicted)},
                    {"born", round_sig(row.born)},
                    {"deviation", round_sig(row.deviation)},
                    {"std_error", round_sig(row.std_error)},
                    {"ok", row.ok}});
  }
  return {{"model", r.model},
          {"engine", r.engine},
          {"pass", r.pass},
          {"max_deviation", round_sig(r.max_deviation)},
          {"max_sigma", round_sig(r.max_sigma)},
          {"rows", rows}};
}

Json to_json(const MaxEpistemicReport& r) {
  Json j = to_json(r.result);
  j["min_f"] = round_sig(r.min_f);
  j["pairs"] = r.pairs;
  j["reciprocity"] = to_json(r.reciprocity);
  j["determinism"] = to_json(r.determinism);
  j["measurement_noncontextuality"] = to_json(r.measurement_noncontextuality);
  j["equivalence_consistent"] = r.equivalence_consistent;
  j["corollary_consistent"] = r.corollary_consistent;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const PrepDistance& d) {
  return {{"tv", estimate_json(d.tv)}, {"verdict", to_string(d.verdict)}};
}

Json to_json(const KsOmReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json j = {{"model", e.model}, {"dim", e.dim}};
    if (e.skipped) {
      j["skipped"] = "dim < 3";
    } else {
      j["deterministic"] = e.deterministic;
      j["measurement_contextual"] = e.measurement_contextual;
      j["ok"] = e.ok;
    }
    entries.push_back(j);
  }
  return {{"pass", r.pass}, {"vacuous", r.vacuous}, {"models", entries}};
}

Json to_json(const TableReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = {{"row", row.reference.row},
              {"name", row.reference.display_name},
              {"type", row.reference.type},
              {"expected", triple_json(row.expected)}};
    if (!row.implemented) {
      j["status"] = "unimplemented";
    } else {
      j["model"] = row.reference.model_name;
      j["declared"] = triple_json(*row.declared);
      j["measured"] = triple_json(*row.measured);
      j["status"] = row.matches ? "match" : "mismatch";
      if (!row.diff.empty()) j["diff"] = row.diff;
    }
    rows.push_back(j);
  }
  return {{"pass", r.pass}, {"seed", r.seed}, {"n_trials", r.n_trials}, {"rows", rows}};
}

Json to_json(const OrthogonalityGraph& g) {
  return {{"vectors", g.n},
          {"dim", g.dim},
          {"edges", g.edges.size()},
          {"bases", g.bases.size()},
          {"maximal_orthogonal_sets", g.maximal_orthogonal_sets.size()}};
}

Json to_json(const ValuationResult& r, const OrthogonalityGraph& g) {
  Json j = {{"graph", to_json(g)},
            {"satisfiable", r.satisfiable},
            {"stats",
             {{"decisions", r.stats.decisions},
              {"propagations", r.stats.propagations},
              {"conflicts", r.stats.conflicts},
              {"solutions", r.stats.solutions}}}};
  if (r.valuation) j["valuation"] = *r.valuation;
  return j;
}

Json to_json(const InfeasibilityCertificate& c) {
  Json j = {{"reason", c.reason}};
  if (c.state >= 0) j["state"] = c.state;
  j["y_ub"] = vec_json(c.y.y_ub);
  j["y_eq"] = vec_json(c.y.y_eq);
  j["check"] = {{"ok", c.check.ok},
                {"min_column", round_sig(c.check.min_column)},
                {"rhs", round_sig(c.check.rhs)},
                {"min_y_ub", round_sig(c.check.min_y_ub)}};
  return j;
}

Json to_json(const FeasibilityResult& r) {
  Json j = {{"feasible", r.feasible}, {"n_atoms", r.atoms.size()}, {"atoms", atom_list(r.atoms)}};
  if (r.feasible) {
    j["mu"] = mu_json(r.mu);
    j["residual"] = round_sig(r.residual);
  }
  if (r.certificate) j["certificate"] = to_json(*r.certificate);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const OverlapBound& b) {
  Json j = {{"status", b.status}, {"n_atoms", b.atoms.size()}};
  j["f_star"] = b.f_star ? Json(round_sig(*b.f_star)) : Json(nullptr);
  j["caveat"] = b.caveat;
  Json pairs = Json::array();
  for (const auto& p : b.pairs) {
    pairs.push_back({{"phi", p.phi}, {"psi", p.psi}, {"born", round_sig(p.born)}, {"f", round_sig(p.f)}});
  }
  j["pairs"] = pairs;
  if (!b.mu.empty()) j["mu"] = mu_json(b.mu);
  if (b.certificate) j["certificate"] = to_json(*b.certificate);
  return j;
}

std::string table_csv(const TableReport& r) {
  std::ostringstream os;
  os << "name,type,reciprocity,determinism,contextual\n";
  for (const auto& row : r.rows) {
    const Triple t = row.measured ? *row.measured : row.expected;
    os << row.reference.display_name << ',' << '"' << row.reference.type << '"' << ',' << yes_no(t.reciprocal)
       << ',' << yes_no(t.deterministic) << ',' << yes_no(t.contextual) << '\n';
  }
  return os.str();
}

std::string table_text(const TableReport& r) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-3s %-10s %-22s %-12s %-12s %-11s %s\n", "#", "Name", "Type", "Reciprocity",
                "Determinism", "Contextual", "Status");
  os << buf;
  for (const auto& row : r.rows) {
    const Triple t = row.measured ? *row.measured : row.expected;
    const std::string status = !row.implemented ? "unimplemented" : row.matches ? "measured" : "MISMATCH";
    std::snprintf(buf, sizeof buf, "%-3d %-10s %-22s %-12s %-12s %-11s %s\n", row.reference.row,
                  row.reference.display_name.c_str(), row.reference.type.c_str(), yes_no(t.reciprocal),
                  yes_no(t.deterministic), yes_no(t.contextual), status.c_str());
    os << buf;
    if (!row.diff.empty()) os << "    " << row.diff << '\n';
  }
  return os.str();
}

}  // namespace ontokit
