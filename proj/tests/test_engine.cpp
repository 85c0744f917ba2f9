#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "grid_oracle.hpp"
#include "ontokit/classify.hpp"
#include "ontokit/engine.hpp"
#include "ontokit/zoo.hpp"

using namespace ontokit;

TEST(Engine, ParseAndSpec) {
  EXPECT_EQ(IntegrationEngine::parse("closed").kind, IntegrationEngine::Kind::ClosedForm);
  const auto q = IntegrationEngine::parse("quad:9");
  EXPECT_EQ(q.kind, IntegrationEngine::Kind::SphereQuadrature);
  EXPECT_EQ(q.level, 9);
  const auto mc = IntegrationEngine::parse("mc:5000", 7);
  EXPECT_EQ(mc.samples, 5000u);
  EXPECT_EQ(mc.seed, 7u);
  EXPECT_EQ(IntegrationEngine::parse(mc.spec(), 7).spec(), mc.spec());
  EXPECT_THROW(IntegrationEngine::parse("simpson"), std::invalid_argument);
  EXPECT_THROW(IntegrationEngine::parse("mc:abc"), std::invalid_argument);
  EXPECT_THROW(IntegrationEngine::parse("quad:0"), std::invalid_argument);
}

// Every epistemic state integrates to one.
TEST(Engine, EpistemicStatesAreNormalized) {
  for (const auto& m : zoo()) {
    const IntegrationEngine eng = m.space.kind() == OnticSpace::Kind::Composite
                                      ? IntegrationEngine::monte_carlo(2000, 3)
                                      : default_engine(m.space, 3);
    for (std::uint64_t i = 0; i < 50; ++i) {
      CounterRng rng(31, 0, i);
      const PureState psi = PureState::random(m.dim, rng);
      const EpistemicState mu = m.prepare_pure(psi);
      const Estimate e = expectation(mu, [](const OnticPoint&) { return 1.0; }, {}, eng, i);
      EXPECT_NEAR(e.value, 1.0, 1e-9) << m.name;
    }
  }
}

TEST(Engine, MonteCarloIndependentOfThreadCount) {
  const OntologicalModel ws = make_ws(3);
  CounterRng rng(5, 0);
  const PureState psi = PureState::random(3, rng);
  const auto basis = random_basis(3, rng);
  IntegrationEngine one = IntegrationEngine::monte_carlo(100000, 9);
  one.threads = 1;
  IntegrationEngine four = one;
  four.threads = 4;
  const auto a = predict_distribution(ws, psi, {}, basis, one);
  const auto b = predict_distribution(ws, psi, {}, basis, four);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].value, b[k].value);
    EXPECT_EQ(a[k].std_error, b[k].std_error);
  }
}

TEST(Engine, ClosedFormRejectsContinuousStates) {
  const OntologicalModel ks = make_ks();
  const EpistemicState mu = ks.prepare_pure(PureState::basis(2, 0));
  EXPECT_THROW(expectation(mu, [](const OnticPoint&) { return 1.0; }, {}, IntegrationEngine::closed_form()),
               EngineUnsupported);
}

TEST(Engine, KsMixtureTotalVariationAgainstGrid) {
  // Both mixtures of I/2 have densities |n . lambda| / (2 pi).
  const double oracle = 0.5 * test::grid_sphere_integral([](const Eigen::Vector3d& v) {
    return std::abs(std::abs(v.z()) - std::abs(v.x())) / (2 * std::numbers::pi);
  });
  const OntologicalModel ks = make_ks();
  const auto [z, x] = standard_mixed_contexts(2);
  const EpistemicState a = ks.prepare_decomposition(*z.decomposition, z);
  const EpistemicState b = ks.prepare_decomposition(*x.decomposition, x);
  const Estimate quad = total_variation(a, b, IntegrationEngine::quadrature(17));
  EXPECT_NEAR(quad.value, oracle, 1e-3);
  EXPECT_NEAR(quad.value, std::sqrt(2.0) - 1.0, 1e-9);
  const Estimate mc = total_variation(a, b, IntegrationEngine::monte_carlo(200000, 4));
  EXPECT_NEAR(mc.value, quad.value, 4 * mc.std_error + 1e-12);
  EXPECT_NEAR(total_variation(a, a, IntegrationEngine::quadrature(17)).value, 0.0, 1e-12);
}

TEST(Engine, AtomicTotalVariation) {
  const OntologicalModel bb = make_bb(2);
  const auto [z, x] = standard_mixed_contexts(2);
  const EpistemicState a = bb.prepare_decomposition(*z.decomposition, z);
  const EpistemicState b = bb.prepare_decomposition(*x.decomposition, x);
  EXPECT_DOUBLE_EQ(total_variation(a, b, IntegrationEngine::closed_form()).value, 1.0);
  EXPECT_DOUBLE_EQ(total_variation(a, a, IntegrationEngine::closed_form()).value, 0.0);
}
