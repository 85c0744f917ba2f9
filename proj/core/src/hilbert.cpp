#include "ontokit/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace ontokit {

namespace {

void require_same_dim(int a, int b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

CVector gaussian_vector(int dim, CounterRng& rng) {
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = Complex(re, im);
  }
  return v;
}

// Gram-Schmidt completion of `seed` using candidate vectors; at each step the
// candidate with the largest residual is taken.
std::vector<PureState> complete(const PureState& seed, std::vector<CVector> candidates) {
  const int d = seed.dim();
  std::vector<CVector> frame{seed.amplitudes()};
  while (static_cast<int>(frame.size()) < d) {
    double best_norm = -1.0;
    CVector best;
    std::size_t best_idx = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      CVector r = candidates[c];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& f : frame) r -= f.dot(r) * f;
      }
      const double n = r.norm();
      if (n > best_norm) {
        best_norm = n;
        best = r;
        best_idx = c;
      }
    }
    if (best_norm < 1e-8) throw InvalidState("basis completion failed: degenerate candidates");
    frame.push_back(best / best_norm);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best_idx));
  }
  std::vector<PureState> out;
  out.reserve(frame.size());
  out.emplace_back(seed);
  for (std::size_t i = 1; i < frame.size(); ++i) out.push_back(PureState::normalized(frame[i]));
  return out;
}

}  // namespace

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw InvalidState("pure state needs dim >= 2");
  if (std::abs(amps_.squaredNorm() - 1.0) > kAlgebraTol) {
    throw InvalidState("pure state not normalized (|psi|^2 = " + std::to_string(amps_.squaredNorm()) +
                       ")");
  }
}

PureState PureState::normalized(const CVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("cannot normalize a zero vector");
  return PureState(v / n);
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw InvalidState("basis index out of range");
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

PureState PureState::random(int dim, CounterRng& rng) {
  return normalized(gaussian_vector(dim, rng));
}

Complex PureState::inner(const PureState& other) const {
  require_same_dim(dim(), other.dim(), "inner product");
  return amps_.dot(other.amps_);  // Eigen conjugates the left operand
}

bool PureState::same_ray(const PureState& other) const {
  if (dim() != other.dim()) return false;
  return std::abs(std::abs(inner(other)) - 1.0) <= kAlgebraTol;
}

double born_probability(const PureState& phi, const PureState& psi) {
  require_same_dim(phi.dim(), psi.dim(), "born_probability");
  return std::min(1.0, std::norm(phi.inner(psi)));
}

CMatrix Projector::matrix() const {
  const auto& a = target_.amplitudes();
  return a * a.adjoint();
}

DensityOperator::DensityOperator(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2) throw InvalidState("density operator must be square, dim >= 2");
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol) {
    throw InvalidState("density operator not Hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0)) > kAlgebraTol) throw InvalidState("density operator trace != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kAlgebraTol) throw InvalidState("density operator not positive");
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(Projector(psi).matrix());
}

double DensityOperator::distance(const DensityOperator& other) const {
  require_same_dim(dim(), other.dim(), "density distance");
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

Decomposition::Decomposition(std::vector<WeightedState> components) : parts_(std::move(components)) {
  if (parts_.empty()) throw InvalidState("empty decomposition");
  double total = 0.0;
  for (const auto& c : parts_) {
    require_same_dim(parts_.front().state.dim(), c.state.dim(), "decomposition");
    if (c.weight < 0.0) throw InvalidState("negative decomposition weight");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kAlgebraTol) throw InvalidState("decomposition weights do not sum to 1");
}

DensityOperator mix(const Decomposition& decomp) {
  const int d = decomp.dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (const auto& c : decomp.components()) m += c.weight * Projector(c.state).matrix();
  // Remove rounding-level anti-Hermitian residue before validation.
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityOperator(std::move(m));
}

BlochVector BlochVector::from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

BlochVector to_bloch(const PureState& psi) {
  if (psi.dim() != 2) throw DimensionMismatch("Bloch map needs dim = 2");
  const Complex a = psi[0];
  const Complex b = psi[1];
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

PureState from_bloch(const BlochVector& n) {
  const double r = std::sqrt(n.x * n.x + n.y * n.y + n.z * n.z);
  if (std::abs(r - 1.0) > 1e-9) throw InvalidState("Bloch vector must be a unit vector");
  const double theta = std::acos(std::clamp(n.z / r, -1.0, 1.0));
  const double phi = std::atan2(n.y, n.x);
  CVector v(2);
  v(0) = std::cos(theta / 2.0);
  v(1) = std::polar(std::sin(theta / 2.0), phi);
  return PureState::normalized(v);
}

PureState qubit_orthogonal(const PureState& psi) {
  if (psi.dim() != 2) throw DimensionMismatch("qubit_orthogonal needs dim = 2");
  CVector v(2);
  v(0) = -std::conj(psi[1]);
  v(1) = std::conj(psi[0]);
  return PureState::normalized(v);
}

std::vector<PureState> completing_basis(const PureState& first) {
  std::vector<CVector> cands;
  for (int k = 0; k < first.dim(); ++k) cands.push_back(PureState::basis(first.dim(), k).amplitudes());
  return complete(first, std::move(cands));
}

std::vector<PureState> random_completing_basis(const PureState& first, CounterRng& rng) {
  std::vector<CVector> cands;
  for (int k = 0; k + 1 < first.dim(); ++k) cands.push_back(gaussian_vector(first.dim(), rng));
  return complete(first, std::move(cands));
}

std::vector<PureState> random_basis(int dim, CounterRng& rng) {
  return random_completing_basis(PureState::random(dim, rng), rng);
}

std::vector<PureState> computational_basis(int dim) {
  std::vector<PureState> out;
  for (int k = 0; k < dim; ++k) out.push_back(PureState::basis(dim, k));
  return out;
}

std::vector<PureState> fourier_basis(int dim) {
  std::vector<PureState> out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int k = 0; k < dim; ++k) {
    CVector v(dim);
    for (int j = 0; j < dim; ++j) {
      v(j) = std::polar(scale, 2.0 * std::numbers::pi * j * k / dim);
    }
    out.push_back(PureState::normalized(v));
  }
  return out;
}

double orthonormality_defect(const std::vector<PureState>& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex g = basis[i].inner(basis[j]);
      worst = std::max(worst, std::abs(g - Complex(i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

int find_in_basis(const std::vector<PureState>& basis, const PureState& outcome) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].same_ray(outcome)) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace ontokit
