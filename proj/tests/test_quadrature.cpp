#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "grid_oracle.hpp"
#include "ontokit/rng.hpp"
#include "ontokit/sphere_quadrature.hpp"

using namespace ontokit;
using ontokit::test::grid_sphere_integral;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d random_unit(CounterRng& rng) {
  Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
  return v.normalized();
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const GaussLegendre gl(6);
  for (int k = 0; k <= 11; ++k) {
    double s = 0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], k);
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(s, exact, 1e-14) << "degree " << k;
  }
  EXPECT_THROW(GaussLegendre(0), std::invalid_argument);
}

TEST(SphereQuadrature, SmoothIntegrands) {
  const auto one = integrate_sphere([](const Eigen::Vector3d&) { return 1.0; }, {}, 8);
  EXPECT_NEAR(one.value, 4 * kPi, 1e-12);
  const auto x2 = integrate_sphere([](const Eigen::Vector3d& v) { return v.x() * v.x(); }, {}, 17);
  EXPECT_NEAR(x2.value, 4 * kPi / 3, 1e-12);
  const auto x2y2z2 = integrate_sphere(
      [](const Eigen::Vector3d& v) { return v.x() * v.x() * v.y() * v.y() * v.z() * v.z(); }, {}, 17);
  EXPECT_NEAR(x2y2z2.value, 4 * kPi / 105, 1e-13);
}

TEST(SphereQuadrature, HemisphereLobe) {
  const Eigen::Vector3d z(0, 0, 1);
  const auto r = integrate_sphere([&](const Eigen::Vector3d& v) { return std::max(0.0, z.dot(v)); }, {z}, 10);
  EXPECT_TRUE(r.aligned);
  EXPECT_NEAR(r.value, kPi, 1e-13);
}

TEST(SphereQuadrature, TwoCutsAreAlwaysAligned) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    CounterRng rng(21, 0, i);
    const Eigen::Vector3d a = random_unit(rng);
    const Eigen::Vector3d b = random_unit(rng);
    auto f = [&](const Eigen::Vector3d& v) { return std::max(0.0, a.dot(v)) * (b.dot(v) > 0 ? 1.0 : 0.0); };
    const auto r = integrate_sphere(f, {a, b}, 17);
    EXPECT_TRUE(r.aligned);
    if (i < 3) {
      EXPECT_NEAR(r.value, grid_sphere_integral(f), 2e-3);
    }
    // Exact value by symmetry: pi/2 (1 + a.b).
    EXPECT_NEAR(r.value, 0.5 * kPi * (1 + a.dot(b)), 1e-12);
  }
}

TEST(SphereQuadrature, UnalignedCutsCarryErrorEstimate) {
  CounterRng rng(22, 0);
  const Eigen::Vector3d a = random_unit(rng), b = random_unit(rng), c = random_unit(rng);
  auto f = [&](const Eigen::Vector3d& v) {
    return std::max(0.0, a.dot(v)) * (b.dot(v) > 0 ? 1.0 : 0.0) * (c.dot(v) > 0 ? 1.0 : 0.5);
  };
  const auto r = integrate_sphere(f, {a, b, c}, 24);
  EXPECT_FALSE(r.aligned);
  const double oracle = grid_sphere_integral(f);
  EXPECT_NEAR(r.value, oracle, 2e-3);
  EXPECT_LT(r.error_estimate, 1e-9);
}

TEST(SphereQuadrature, ProductRuleWeightsSumToArea) {
  double s = 0;
  for (const auto& n : sphere_product_rule(9)) {
    EXPECT_NEAR(n.point.norm(), 1.0, 1e-14);
    s += n.weight;
  }
  EXPECT_NEAR(s, 4 * kPi, 1e-12);
}
