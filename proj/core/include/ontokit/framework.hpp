#pragma once

// Ontological models: ontic spaces, preparation distributions over them
// (epistemic states) and measurement response functions.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ontokit/hilbert.hpp"
#include "ontokit/rng.hpp"

namespace ontokit {

struct SpherePoint {
  Vec3 n;
};
struct RayPoint {
  PureState ray;
};
/// A ray plus auxiliary data. Unit-interval auxiliaries live in aux(0).real();
/// Gaussian auxiliaries are d complex coordinates in the computational basis.
struct CompositePoint {
  PureState ray;
  CVector aux;
};
/// Index into a finite list of ontic atoms.
struct AtomPoint {
  int index;
};

using OnticPoint = std::variant<SpherePoint, RayPoint, CompositePoint, AtomPoint>;

std::string describe(const OnticPoint& p);
/// Structural equality; rays compare as rays, sphere points within 1e-12.
bool same_point(const OnticPoint& a, const OnticPoint& b);

enum class AuxKind { None, UnitInterval, ComplexGaussian };

class OnticSpace {
 public:
  enum class Kind { Sphere2, Ray, Composite, Atoms };

  static OnticSpace sphere();
  static OnticSpace rays(int dim);
  static OnticSpace composite(int dim, AuxKind aux);
  static OnticSpace atoms(int count);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  AuxKind aux() const noexcept { return aux_; }
  int atom_count() const noexcept { return atoms_; }
  std::string name() const;

  /// Draw from the fixed reference measure: uniform on the sphere,
  /// Haar on rays, product with the auxiliary law on composites, uniform on
  /// atoms.
  OnticPoint sample_reference(CounterRng& rng) const;
  CVector sample_aux(CounterRng& rng) const;

 private:
  Kind kind_ = Kind::Sphere2;
  int dim_ = 2;
  AuxKind aux_ = AuxKind::None;
  int atoms_ = 0;
};

struct PrepContext {
  std::string label = "direct";
  /// Present when the context realizes a mixed state by this decomposition.
  std::optional<Decomposition> decomposition;
};

struct MeasContext {
  std::string label = "canonical";
  /// Ordered orthonormal basis that contains the measured outcome. Empty
  /// means "complete the outcome canonically".
  std::vector<PureState> basis;
};

struct WeightedPoint {
  double weight;
  OnticPoint point;
};

/// Density weight * max(0, axis . lambda) / pi on the unit sphere.
struct CosineLobe {
  double weight;
  Vec3 axis;
};

/// Preparation distribution mu(lambda | psi, S_P).
///
/// Densities are taken with respect to surface area on the sphere. Atomic
/// distributions are kept as explicit point masses since they have no
/// density; on composite spaces the atoms fix the ray component and the
/// auxiliary component follows the space's reference law.
class EpistemicState {
 public:
  struct PointMasses {
    std::vector<WeightedPoint> atoms;
    bool aux_from_reference = false;
  };
  struct CosineLobes {
    std::vector<CosineLobe> lobes;
  };
  struct Density {
    std::function<double(const OnticPoint&)> density;
    std::function<OnticPoint(CounterRng&)> sampler;
    std::function<bool(const OnticPoint&)> support;
    std::vector<Vec3> cuts;
  };
  using Representation = std::variant<PointMasses, CosineLobes, Density>;

  EpistemicState(OnticSpace space, Representation rep);

  const OnticSpace& space() const noexcept { return space_; }
  const Representation& representation() const noexcept { return rep_; }
  bool is_atomic() const { return std::holds_alternative<PointMasses>(rep_); }

  OnticPoint sample(CounterRng& rng) const;
  /// Analytic membership in Lambda_psi.
  bool in_support(const OnticPoint& p) const;
  /// Throws std::logic_error for atomic states.
  double density(const OnticPoint& p) const;
  /// Planes across which the density is non-smooth (sphere states only).
  std::vector<Vec3> cuts() const;
  double total_weight() const;

  /// Convex combination of states of one representation kind.
  static EpistemicState mixture(const std::vector<double>& weights, const std::vector<EpistemicState>& parts);

 private:
  OnticSpace space_;
  Representation rep_;
  std::vector<double> cumulative_;  // for weighted component selection
};

struct ResponseFunction {
  using Eval = std::function<double(const PureState& outcome, const OnticPoint&, const MeasContext&)>;
  using Pred = std::function<bool(const PureState& outcome, const OnticPoint&, const MeasContext&)>;
  using Cuts = std::function<std::vector<Vec3>(const PureState& outcome, const MeasContext&)>;

  Eval evaluate;
  /// xi == 1
  Pred core;
  /// xi > 0
  Pred support;
  /// Discontinuity planes of xi on the sphere; may be empty.
  Cuts cuts;
  /// Structural flag: evaluate reads the ray component of a composite point.
  bool reads_state_component = false;
};

struct DeclaredProperties {
  bool reciprocal = false;
  bool outcome_deterministic = false;
  bool measurement_contextual = false;
  bool preparation_contextual = false;
  bool psi_dependent_response = false;
};

struct OntologicalModel {
  std::string name;          // registry key, e.g. "bb:3"
  std::string display_name;  // e.g. "B-B"
  std::string type;          // e.g. "ontic-complete"
  int table_row = 0;
  int dim = 2;
  OnticSpace space;
  std::function<EpistemicState(const PureState&, const PrepContext&)> prepare;
  /// Optional; defaults to the mixture of the component preparations.
  std::function<EpistemicState(const Decomposition&, const PrepContext&)> prepare_mixed;
  ResponseFunction respond;
  DeclaredProperties declared;

  std::vector<int> supported_dims() const { return {dim}; }
  bool supports(int d) const { return d == dim; }

  EpistemicState prepare_pure(const PureState& psi, const PrepContext& ctx = {}) const;
  EpistemicState prepare_decomposition(const Decomposition& decomp, const PrepContext& ctx = {}) const;

  /// Resolves an empty context basis to the canonical completion.
  MeasContext resolve(const PureState& outcome, const MeasContext& ctx) const;
  double evaluate(const PureState& outcome, const OnticPoint& p, const MeasContext& ctx) const;
  bool core(const PureState& outcome, const OnticPoint& p, const MeasContext& ctx) const;
  bool support(const PureState& outcome, const OnticPoint& p, const MeasContext& ctx) const;
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ontokit
