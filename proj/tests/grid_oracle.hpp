#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace ontokit::test {

// Midpoint rule on an (cos theta, phi) grid: area-preserving, no knowledge
// of where the integrand jumps. Error is O(1/n) for discontinuous f.
template <class F>
double grid_sphere_integral(const F& f, int n_t = 1500, int n_phi = 3000) {
  const double dt = 2.0 / n_t;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  double total = 0.0;
  for (int i = 0; i < n_t; ++i) {
    const double t = -1.0 + (i + 0.5) * dt;
    const double s = std::sqrt(1.0 - t * t);
    double ring = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = (k + 0.5) * dphi;
      ring += f(Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), t));
    }
    total += ring;
  }
  return total * dt * dphi;
}

}  // namespace ontokit::test
