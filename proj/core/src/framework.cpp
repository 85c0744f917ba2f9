#include "ontokit/framework.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ontokit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt(const CVector& v) {
  std::string s = "(";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v(i).real());
    if (v(i).imag() != 0.0) s += (v(i).imag() < 0 ? "" : "+") + fmt(v(i).imag()) + "i";
  }
  return s + ")";
}

Vec3 uniform_sphere(CounterRng& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

// Density (axis . lambda)/pi on the hemisphere about `axis`.
Vec3 cosine_hemisphere(const Vec3& axis, CounterRng& rng) {
  const double ct = std::sqrt(rng.uniform());
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  Eigen::Index k = 0;
  axis.cwiseAbs().minCoeff(&k);
  const Vec3 u = Vec3::Unit(k).cross(axis).normalized();
  const Vec3 v = axis.cross(u);
  return (st * std::cos(phi)) * u + (st * std::sin(phi)) * v + ct * axis;
}

std::size_t pick(const std::vector<double>& cumulative, CounterRng& rng) {
  if (cumulative.size() <= 1) return 0;
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

std::string describe(const OnticPoint& p) {
  return std::visit(overloaded{
                        [](const SpherePoint& s) {
                          return "sphere(" + fmt(s.n.x()) + ", " + fmt(s.n.y()) + ", " + fmt(s.n.z()) + ")";
                        },
                        [](const RayPoint& r) { return "ray" + fmt(r.ray.amplitudes()); },
                        [](const CompositePoint& c) {
                          return "composite{ray" + fmt(c.ray.amplitudes()) + ", aux" + fmt(c.aux) + "}";
                        },
                        [](const AtomPoint& a) { return "atom#" + std::to_string(a.index); },
                    },
                    p);
}

bool same_point(const OnticPoint& a, const OnticPoint& b) {
  if (a.index() != b.index()) return false;
  return std::visit(overloaded{
                        [&](const SpherePoint& s) { return (s.n - std::get<SpherePoint>(b).n).norm() <= kAlgebraTol; },
                        [&](const RayPoint& r) { return r.ray.same_ray(std::get<RayPoint>(b).ray); },
                        [&](const CompositePoint& c) {
                          const auto& o = std::get<CompositePoint>(b);
                          return c.ray.same_ray(o.ray) && c.aux.size() == o.aux.size() &&
                                 (c.aux - o.aux).cwiseAbs().maxCoeff() <= kAlgebraTol;
                        },
                        [&](const AtomPoint& x) { return x.index == std::get<AtomPoint>(b).index; },
                    },
                    a);
}

OnticSpace OnticSpace::sphere() { return OnticSpace{}; }

OnticSpace OnticSpace::rays(int dim) {
  OnticSpace s;
  s.kind_ = Kind::Ray;
  s.dim_ = dim;
  return s;
}

OnticSpace OnticSpace::composite(int dim, AuxKind aux) {
  OnticSpace s;
  s.kind_ = Kind::Composite;
  s.dim_ = dim;
  s.aux_ = aux;
  return s;
}

OnticSpace OnticSpace::atoms(int count) {
  OnticSpace s;
  s.kind_ = Kind::Atoms;
  s.atoms_ = count;
  s.dim_ = 0;
  return s;
}

std::string OnticSpace::name() const {
  switch (kind_) {
    case Kind::Sphere2:
      return "Sphere2";
    case Kind::Ray:
      return "Ray(" + std::to_string(dim_) + ")";
    case Kind::Composite:
      return "Composite(Ray(" + std::to_string(dim_) + ") x " +
             (aux_ == AuxKind::UnitInterval ? std::string("[0,1]") : "C^" + std::to_string(dim_)) + ")";
    case Kind::Atoms:
      return "Atoms(" + std::to_string(atoms_) + ")";
  }
  return "?";
}

CVector OnticSpace::sample_aux(CounterRng& rng) const {
  switch (aux_) {
    case AuxKind::None:
      return CVector(0);
    case AuxKind::UnitInterval: {
      CVector v(1);
      v(0) = rng.uniform();
      return v;
    }
    case AuxKind::ComplexGaussian: {
      CVector v(dim_);
      for (int i = 0; i < dim_; ++i) {
        const double re = rng.normal() * std::numbers::sqrt2 / 2.0;
        const double im = rng.normal() * std::numbers::sqrt2 / 2.0;
        v(i) = Complex(re, im);
      }
      return v;
    }
  }
  return CVector(0);
}

OnticPoint OnticSpace::sample_reference(CounterRng& rng) const {
  switch (kind_) {
    case Kind::Sphere2:
      return SpherePoint{uniform_sphere(rng)};
    case Kind::Ray:
      return RayPoint{PureState::random(dim_, rng)};
    case Kind::Composite: {
      PureState ray = PureState::random(dim_, rng);
      return CompositePoint{std::move(ray), sample_aux(rng)};
    }
    case Kind::Atoms:
      return AtomPoint{static_cast<int>(rng.below(static_cast<std::uint64_t>(atoms_)))};
  }
  throw std::logic_error("unknown ontic space");
}

EpistemicState::EpistemicState(OnticSpace space, Representation rep) : space_(std::move(space)), rep_(std::move(rep)) {
  double acc = 0.0;
  std::visit(overloaded{
                 [&](const PointMasses& pm) {
                   if (pm.atoms.empty()) throw std::invalid_argument("empty point-mass state");
                   for (const auto& a : pm.atoms) {
                     if (a.weight < 0.0) throw std::invalid_argument("negative point mass");
                     cumulative_.push_back(acc += a.weight);
                   }
                 },
                 [&](const CosineLobes& cl) {
                   if (space_.kind() != OnticSpace::Kind::Sphere2) {
                     throw std::invalid_argument("cosine lobes need a sphere ontic space");
                   }
                   if (cl.lobes.empty()) throw std::invalid_argument("empty lobe mixture");
                   for (const auto& l : cl.lobes) {
                     if (l.weight < 0.0) throw std::invalid_argument("negative lobe weight");
                     cumulative_.push_back(acc += l.weight);
                   }
                 },
                 [&](const Density& d) {
                   if (!d.density || !d.sampler || !d.support) {
                     throw std::invalid_argument("density state needs density, sampler and support");
                   }
                 },
             },
             rep_);
}

OnticPoint EpistemicState::sample(CounterRng& rng) const {
  return std::visit(overloaded{
                        [&](const PointMasses& pm) -> OnticPoint {
                          const auto& atom = pm.atoms[pick(cumulative_, rng)];
                          if (!pm.aux_from_reference) return atom.point;
                          const auto* r = std::get_if<RayPoint>(&atom.point);
                          if (!r) throw std::logic_error("auxiliary sampling needs ray atoms");
                          return CompositePoint{r->ray, space_.sample_aux(rng)};
                        },
                        [&](const CosineLobes& cl) -> OnticPoint {
                          const auto& lobe = cl.lobes[pick(cumulative_, rng)];
                          return SpherePoint{cosine_hemisphere(lobe.axis, rng)};
                        },
                        [&](const Density& d) { return d.sampler(rng); },
                    },
                    rep_);
}

bool EpistemicState::in_support(const OnticPoint& p) const {
  return std::visit(overloaded{
                        [&](const PointMasses& pm) {
                          for (const auto& a : pm.atoms) {
                            if (a.weight <= 0.0) continue;
                            if (pm.aux_from_reference) {
                              const auto* c = std::get_if<CompositePoint>(&p);
                              if (c && c->ray.same_ray(std::get<RayPoint>(a.point).ray)) return true;
                            } else if (same_point(a.point, p)) {
                              return true;
                            }
                          }
                          return false;
                        },
                        [&](const CosineLobes& cl) {
                          const auto* s = std::get_if<SpherePoint>(&p);
                          if (!s) return false;
                          return std::any_of(cl.lobes.begin(), cl.lobes.end(), [&](const CosineLobe& l) {
                            return l.weight > 0.0 && l.axis.dot(s->n) > 0.0;
                          });
                        },
                        [&](const Density& d) { return d.support(p); },
                    },
                    rep_);
}

double EpistemicState::density(const OnticPoint& p) const {
  return std::visit(overloaded{
                        [&](const PointMasses&) -> double {
                          throw std::logic_error("point-mass state has no density");
                        },
                        [&](const CosineLobes& cl) {
                          const auto& n = std::get<SpherePoint>(p).n;
                          double s = 0.0;
                          for (const auto& l : cl.lobes) s += l.weight * std::max(0.0, l.axis.dot(n));
                          return s / std::numbers::pi;
                        },
                        [&](const Density& d) { return d.density(p); },
                    },
                    rep_);
}

std::vector<Vec3> EpistemicState::cuts() const {
  if (const auto* cl = std::get_if<CosineLobes>(&rep_)) {
    std::vector<Vec3> out;
    for (const auto& l : cl->lobes) out.push_back(l.axis);
    return out;
  }
  if (const auto* d = std::get_if<Density>(&rep_)) return d->cuts;
  return {};
}

double EpistemicState::total_weight() const { return cumulative_.empty() ? 1.0 : cumulative_.back(); }

EpistemicState EpistemicState::mixture(const std::vector<double>& weights, const std::vector<EpistemicState>& parts) {
  if (parts.empty() || weights.size() != parts.size()) throw std::invalid_argument("bad mixture");
  const auto& space = parts.front().space();
  if (const auto* first = std::get_if<PointMasses>(&parts.front().rep_)) {
    PointMasses out;
    out.aux_from_reference = first->aux_from_reference;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto* pm = std::get_if<PointMasses>(&parts[k].rep_);
      if (!pm || pm->aux_from_reference != out.aux_from_reference) {
        throw std::invalid_argument("mixture of incompatible representations");
      }
      for (const auto& a : pm->atoms) {
        auto it = std::find_if(out.atoms.begin(), out.atoms.end(),
                               [&](const WeightedPoint& w) { return same_point(w.point, a.point); });
        if (it != out.atoms.end()) {
          it->weight += weights[k] * a.weight;
        } else {
          out.atoms.push_back({weights[k] * a.weight, a.point});
        }
      }
    }
    return EpistemicState(space, std::move(out));
  }
  if (std::holds_alternative<CosineLobes>(parts.front().rep_)) {
    CosineLobes out;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto* cl = std::get_if<CosineLobes>(&parts[k].rep_);
      if (!cl) throw std::invalid_argument("mixture of incompatible representations");
      for (const auto& l : cl->lobes) out.lobes.push_back({weights[k] * l.weight, l.axis});
    }
    return EpistemicState(space, std::move(out));
  }
  // Generic densities: weighted sums of the component functions.
  std::vector<double> cum;
  double acc = 0.0;
  for (double w : weights) cum.push_back(acc += w);
  Density out;
  out.density = [weights, parts](const OnticPoint& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) s += weights[k] * parts[k].density(p);
    return s;
  };
  out.sampler = [cum, parts](CounterRng& rng) { return parts[pick(cum, rng)].sample(rng); };
  out.support = [weights, parts](const OnticPoint& p) {
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (weights[k] > 0.0 && parts[k].in_support(p)) return true;
    }
    return false;
  };
  for (const auto& p : parts) {
    for (const auto& c : p.cuts()) out.cuts.push_back(c);
  }
  return EpistemicState(space, std::move(out));
}

EpistemicState OntologicalModel::prepare_pure(const PureState& psi, const PrepContext& ctx) const {
  if (!supports(psi.dim())) {
    throw UnsupportedDimension(name + " does not support dim " + std::to_string(psi.dim()));
  }
  return prepare(psi, ctx);
}

EpistemicState OntologicalModel::prepare_decomposition(const Decomposition& decomp, const PrepContext& ctx) const {
  if (!supports(decomp.dim())) {
    throw UnsupportedDimension(name + " does not support dim " + std::to_string(decomp.dim()));
  }
  if (prepare_mixed) return prepare_mixed(decomp, ctx);
  std::vector<double> w;
  std::vector<EpistemicState> parts;
  for (const auto& c : decomp.components()) {
    w.push_back(c.weight);
    parts.push_back(prepare(c.state, ctx));
  }
  return EpistemicState::mixture(w, parts);
}

MeasContext OntologicalModel::resolve(const PureState& outcome, const MeasContext& ctx) const {
  if (!ctx.basis.empty()) {
    if (find_in_basis(ctx.basis, outcome) < 0) {
      throw std::invalid_argument("measured outcome is not an element of the context basis '" + ctx.label + "'");
    }
    return ctx;
  }
  return MeasContext{ctx.label, completing_basis(outcome)};
}

double OntologicalModel::evaluate(const PureState& outcome, const OnticPoint& p, const MeasContext& ctx) const {
  return respond.evaluate(outcome, p, resolve(outcome, ctx));
}

bool OntologicalModel::core(const PureState& outcome, const OnticPoint& p, const MeasContext& ctx) const {
  return respond.core(outcome, p, resolve(outcome, ctx));
}

bool OntologicalModel::support(const PureState& outcome, const OnticPoint& p, const MeasContext& ctx) const {
  return respond.support(outcome, p, resolve(outcome, ctx));
}

}  // namespace ontokit
