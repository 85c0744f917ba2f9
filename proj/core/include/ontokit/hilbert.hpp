#pragma once

// Finite-dimensional pure states, projectors, density operators and the
// qubit Bloch-sphere map.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ontokit/rng.hpp"

namespace ontokit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

/// Tolerance for algebraic identities on states and operators.
inline constexpr double kAlgebraTol = 1e-12;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unit vector in C^d, d >= 2. Compared as a ray (global phase ignored).
class PureState {
 public:
  /// Takes ownership of already-normalized amplitudes; throws InvalidState
  /// when the norm deviates from 1 by more than kAlgebraTol.
  explicit PureState(CVector amplitudes);

  /// Normalizes first. Throws on a zero vector.
  static PureState normalized(const CVector& v);
  static PureState basis(int dim, int index);
  /// Haar-distributed random state.
  static PureState random(int dim, CounterRng& rng);

  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const noexcept { return amps_; }
  Complex operator[](int i) const { return amps_(i); }

  /// <this|other>
  Complex inner(const PureState& other) const;
  /// Ray equality: |<a|b>| = 1 within kAlgebraTol.
  bool same_ray(const PureState& other) const;

 private:
  CVector amps_;
};

/// |<phi|psi>|^2
double born_probability(const PureState& phi, const PureState& psi);

/// M = |phi><phi|, carried as its target ray.
class Projector {
 public:
  explicit Projector(PureState target) : target_(std::move(target)) {}
  const PureState& target() const noexcept { return target_; }
  CMatrix matrix() const;
  /// <psi|M|psi>
  double expectation(const PureState& psi) const { return born_probability(target_, psi); }

 private:
  PureState target_;
};

class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-12).
  explicit DensityOperator(CMatrix m);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator pure(const PureState& psi);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  /// Max-abs entrywise distance.
  double distance(const DensityOperator& other) const;
  bool approx_equal(const DensityOperator& other, double tol = kAlgebraTol) const {
    return distance(other) <= tol;
  }

 private:
  CMatrix m_;
};

struct WeightedState {
  double weight;
  PureState state;
};

/// Convex decomposition sum_k w_k |psi_k><psi_k|.
class Decomposition {
 public:
  explicit Decomposition(std::vector<WeightedState> components);
  const std::vector<WeightedState>& components() const noexcept { return parts_; }
  int dim() const noexcept { return parts_.front().state.dim(); }

 private:
  std::vector<WeightedState> parts_;
};

DensityOperator mix(const Decomposition& decomp);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  Vec3 vec() const { return {x, y, z}; }
  static BlochVector from(const Vec3& v);
};

/// |0> maps to the north pole; n = (sin t cos p, sin t sin p, cos t).
BlochVector to_bloch(const PureState& psi);
PureState from_bloch(const BlochVector& n);

/// The state orthogonal to a qubit state (unique up to phase).
PureState qubit_orthogonal(const PureState& psi);

/// Orthonormal basis whose first element is `first`, completed by
/// Gram-Schmidt against the computational basis.
std::vector<PureState> completing_basis(const PureState& first);
/// Same, but the complement is a Haar-random orthonormal frame.
std::vector<PureState> random_completing_basis(const PureState& first, CounterRng& rng);
std::vector<PureState> random_basis(int dim, CounterRng& rng);
std::vector<PureState> computational_basis(int dim);
/// Discrete Fourier basis |k> = d^{-1/2} sum_j w^{jk} |j>.
std::vector<PureState> fourier_basis(int dim);

/// Max |<b_i|b_j> - delta_ij|.
double orthonormality_defect(const std::vector<PureState>& basis);

/// Index of the basis element that equals `outcome` as a ray, or -1.
int find_in_basis(const std::vector<PureState>& basis, const PureState& outcome);

}  // namespace ontokit
