#include "ontokit/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ontokit {

namespace {

const PureState& ray_of(const OnticPoint& p, const char* model) {
  if (const auto* r = std::get_if<RayPoint>(&p)) return r->ray;
  if (const auto* c = std::get_if<CompositePoint>(&p)) return c->ray;
  throw std::invalid_argument(std::string(model) + ": ontic point has no ray component");
}

const CompositePoint& composite_of(const OnticPoint& p, const char* model) {
  if (const auto* c = std::get_if<CompositePoint>(&p)) return *c;
  throw std::invalid_argument(std::string(model) + ": expected a composite ontic point");
}

void require_dim(int d, int min) {
  if (d < min) throw UnsupportedDimension("dimension must be >= " + std::to_string(min));
}

ResponseFunction indicator(ResponseFunction::Eval eval) {
  ResponseFunction r;
  r.evaluate = eval;
  r.core = [eval](const PureState& o, const OnticPoint& p, const MeasContext& c) { return eval(o, p, c) == 1.0; };
  r.support = [eval](const PureState& o, const OnticPoint& p, const MeasContext& c) { return eval(o, p, c) > 0.0; };
  r.cuts = [](const PureState&, const MeasContext&) { return std::vector<Vec3>{}; };
  return r;
}

EpistemicState ray_point_mass(const OnticSpace& space, const PureState& psi, bool aux) {
  EpistemicState::PointMasses pm;
  pm.atoms.push_back({1.0, RayPoint{psi}});
  pm.aux_from_reference = aux;
  return EpistemicState(space, std::move(pm));
}

}  // namespace

OntologicalModel make_bb(int dim) {
  require_dim(dim, 2);
  OntologicalModel m;
  m.name = "bb:" + std::to_string(dim);
  m.display_name = "B-B";
  m.type = "ontic-complete";
  m.table_row = 1;
  m.dim = dim;
  m.space = OnticSpace::rays(dim);
  m.prepare = [space = m.space](const PureState& psi, const PrepContext&) {
    return ray_point_mass(space, psi, false);
  };
  m.respond.evaluate = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return std::min(1.0, born_probability(phi, ray_of(p, "bb")));
  };
  // Core is the ray itself; comparing rays avoids rounding in |<l|phi>|^2.
  m.respond.core = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return ray_of(p, "bb").same_ray(phi);
  };
  m.respond.support = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return born_probability(phi, ray_of(p, "bb")) > 0.0;
  };
  m.respond.cuts = [](const PureState&, const MeasContext&) { return std::vector<Vec3>{}; };
  m.respond.reads_state_component = true;
  m.declared = {.reciprocal = true,
                .outcome_deterministic = false,
                .measurement_contextual = false,
                .preparation_contextual = true,
                .psi_dependent_response = true};
  return m;
}

OntologicalModel make_ks() {
  OntologicalModel m;
  m.name = "ks";
  m.display_name = "K-S";
  m.type = "epistemic (d=2)";
  m.table_row = 2;
  m.dim = 2;
  m.space = OnticSpace::sphere();
  m.prepare = [space = m.space](const PureState& psi, const PrepContext&) {
    return EpistemicState(space, EpistemicState::CosineLobes{{{1.0, to_bloch(psi).vec()}}});
  };
  m.respond = indicator([](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    const auto* s = std::get_if<SpherePoint>(&p);
    if (!s) throw std::invalid_argument("ks: expected a sphere point");
    return to_bloch(phi).vec().dot(s->n) > 0.0 ? 1.0 : 0.0;
  });
  m.respond.cuts = [](const PureState& phi, const MeasContext&) { return std::vector<Vec3>{to_bloch(phi).vec()}; };
  m.declared = {.reciprocal = true,
                .outcome_deterministic = true,
                .measurement_contextual = false,
                .preparation_contextual = true,
                .psi_dependent_response = false};
  return m;
}

PureState bell2_first(const PureState& phi) {
  if (phi.dim() != 2) throw DimensionMismatch("bell2 needs qubit states");
  const PureState perp = qubit_orthogonal(phi);
  const Vec3 a = to_bloch(phi).vec();
  const Vec3 b = to_bloch(perp).vec();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(a(k) - b(k)) > kAlgebraTol) return a(k) < b(k) ? phi : perp;
  }
  return phi;
}

OntologicalModel make_bell2() {
  OntologicalModel m;
  m.name = "bell2";
  m.display_name = "Bell 2nd";
  m.type = "ontic-supplem. (d=2)";
  m.table_row = 5;
  m.dim = 2;
  m.space = OnticSpace::composite(2, AuxKind::UnitInterval);
  m.prepare = [space = m.space](const PureState& psi, const PrepContext&) {
    return ray_point_mass(space, psi, true);
  };
  // The second outcome is the exact complement of the first, so the answer
  // never depends on how the caller ordered the basis.
  m.respond = indicator([](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    const auto& c = composite_of(p, "bell2");
    const double x = c.aux(0).real();
    const PureState first = bell2_first(phi);
    const bool first_wins = x < born_probability(first, c.ray);
    return first_wins == first.same_ray(phi) ? 1.0 : 0.0;
  });
  m.respond.reads_state_component = true;
  m.declared = {.reciprocal = false,
                .outcome_deterministic = true,
                .measurement_contextual = false,
                .preparation_contextual = true,
                .psi_dependent_response = true};
  return m;
}

int ws_outcome(const CVector& a, const CVector& b) {
  if (a.size() != b.size() || a.size() == 0) throw DimensionMismatch("ws: amplitude vectors differ in length");
  int best = 0;
  double best_ratio = -1.0;
  for (int j = 0; j < a.size(); ++j) {
    const double na = std::abs(a(j));
    const double nb = std::abs(b(j));
    double r;
    if (na == 0.0) {
      r = 0.0;
    } else if (nb == 0.0) {
      r = std::numeric_limits<double>::infinity();
    } else {
      r = na / nb;
    }
    if (r > best_ratio) {
      best_ratio = r;
      best = j;
    }
  }
  return best;
}

OntologicalModel make_ws(int dim) {
  require_dim(dim, 2);
  OntologicalModel m;
  m.name = "ws:" + std::to_string(dim);
  m.display_name = "W-S";
  m.type = "ontic-supplem.";
  m.table_row = 7;
  m.dim = dim;
  m.space = OnticSpace::composite(dim, AuxKind::ComplexGaussian);
  m.prepare = [space = m.space](const PureState& psi, const PrepContext&) {
    return ray_point_mass(space, psi, true);
  };
  m.respond = indicator([](const PureState& phi, const OnticPoint& p, const MeasContext& ctx) {
    const auto& c = composite_of(p, "ws");
    const int i = find_in_basis(ctx.basis, phi);
    if (i < 0) throw std::invalid_argument("ws: outcome is not in the measurement basis");
    const int d = static_cast<int>(ctx.basis.size());
    CVector a(d), b(d);
    for (int j = 0; j < d; ++j) {
      a(j) = ctx.basis[j].amplitudes().dot(c.ray.amplitudes());
      b(j) = ctx.basis[j].amplitudes().dot(c.aux);
    }
    return ws_outcome(a, b) == i ? 1.0 : 0.0;
  });
  m.respond.reads_state_component = true;
  m.declared = {.reciprocal = false,
                .outcome_deterministic = true,
                .measurement_contextual = true,
                .preparation_contextual = true,
                .psi_dependent_response = true};
  return m;
}

OntologicalModel make_model(const std::string& name) {
  const auto colon = name.find(':');
  const std::string base = name.substr(0, colon);
  int dim = -1;
  if (colon != std::string::npos) {
    const std::string arg = name.substr(colon + 1);
    if (arg.empty() || arg.size() > 3 || !std::all_of(arg.begin(), arg.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw UnknownModel("bad dimension suffix in model name '" + name + "'");
    }
    dim = std::stoi(arg);
  }
  auto fixed = [&](int d, OntologicalModel (*make)()) {
    if (dim != -1 && dim != d) throw UnsupportedDimension(base + " is defined only for d=" + std::to_string(d));
    return make();
  };
  if (base == "bb") return make_bb(dim == -1 ? 3 : dim);
  if (base == "ws") return make_ws(dim == -1 ? 3 : dim);
  if (base == "ks") return fixed(2, make_ks);
  if (base == "bell2") return fixed(2, make_bell2);
  throw UnknownModel("unknown model '" + name + "' (known: bb[:d], ks, bell2, ws[:d])");
}

std::vector<std::string> model_names() { return {"bb:3", "ks", "bell2", "ws:3"}; }

std::vector<OntologicalModel> zoo() {
  std::vector<OntologicalModel> out;
  for (const auto& n : model_names()) out.push_back(make_model(n));
  return out;
}

std::vector<TableEntry> reference_table() {
  return {
      {1, "B-B", "ontic-complete", true, false, false, "bb:3"},
      {2, "K-S", "epistemic (d=2)", true, true, false, "ks"},
      {3, "Aaronson", "ontic-supplem.", true, false, true, ""},
      {4, "Bell 1st", "ontic-supplem.", false, true, true, ""},
      {5, "Bell 2nd", "ontic-supplem. (d=2)", false, true, false, "bell2"},
      {6, "Aerts", "ontic-complete (d=2)", true, false, false, ""},
      {7, "W-S", "ontic-supplem.", false, true, true, "ws:3"},
  };
}

}  // namespace ontokit
