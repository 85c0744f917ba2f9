#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "grid_oracle.hpp"
#include "ontokit/classify.hpp"
#include "ontokit/zoo.hpp"
#include "support.hpp"

using namespace ontokit;
using ontokit::test::qubit;

TEST(Registry, NamesAndDimensions) {
  EXPECT_EQ(make_model("bb").dim, 3);
  EXPECT_EQ(make_model("bb:5").dim, 5);
  EXPECT_EQ(make_model("ws").dim, 3);
  EXPECT_EQ(make_model("ks").dim, 2);
  EXPECT_EQ(make_model("bell2").name, "bell2");
  EXPECT_THROW(make_model("ks:3"), UnsupportedDimension);
  EXPECT_THROW(make_model("bell2:4"), UnsupportedDimension);
  EXPECT_THROW(make_model("bb:1"), UnsupportedDimension);
  EXPECT_THROW(make_model("nosuch"), UnknownModel);
  EXPECT_EQ(zoo().size(), model_names().size());
}

TEST(Registry, ReferenceTableRows) {
  const auto rows = reference_table();
  ASSERT_EQ(rows.size(), 7u);
  const bool expect[7][3] = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 1}};
  for (int i = 0; i < 7; ++i) {
    EXPECT_EQ(rows[i].row, i + 1);
    EXPECT_EQ(rows[i].reciprocal, expect[i][0]) << rows[i].display_name;
    EXPECT_EQ(rows[i].deterministic, expect[i][1]) << rows[i].display_name;
    EXPECT_EQ(rows[i].contextual, expect[i][2]) << rows[i].display_name;
  }
  EXPECT_TRUE(rows[2].model_name.empty());
  EXPECT_TRUE(rows[3].model_name.empty());
  EXPECT_TRUE(rows[5].model_name.empty());
}

TEST(BB, BornExactAndNoOverlap) {
  const OntologicalModel bb = make_bb(3);
  for (std::uint64_t i = 0; i < 50; ++i) {
    CounterRng rng(1, 0, i);
    const PureState psi = PureState::random(3, rng);
    const PureState phi = PureState::random(3, rng);
    const Estimate p = predict_probability(bb, psi, {}, phi, {}, IntegrationEngine::closed_form());
    EXPECT_EQ(p.value, born_probability(phi, psi));
    EXPECT_EQ(overlap_fraction(bb, phi, psi, IntegrationEngine::closed_form()).value, 0.0);
  }
}

TEST(KS, ProbabilitiesAtSpecialAngles) {
  const OntologicalModel ks = make_ks();
  const auto eng = IntegrationEngine::quadrature(17);
  const PureState up = PureState::basis(2, 0);
  const PureState down = PureState::basis(2, 1);
  const PureState plus = qubit(1, 0, 1, 0);
  EXPECT_NEAR(predict_probability(ks, up, {}, up, {}, eng).value, 1.0, 1e-12);
  EXPECT_NEAR(predict_probability(ks, up, {}, down, {}, eng).value, 0.0, 1e-12);
  EXPECT_NEAR(predict_probability(ks, up, {}, plus, {}, eng).value, 0.5, 1e-12);
}

TEST(KS, BornAgainstGridOracle) {
  const OntologicalModel ks = make_ks();
  for (std::uint64_t i = 0; i < 3; ++i) {
    CounterRng rng(2, 0, i);
    const PureState psi = PureState::random(2, rng);
    const PureState phi = PureState::random(2, rng);
    const Vec3 np = to_bloch(psi).vec();
    const Vec3 nf = to_bloch(phi).vec();
    // The model's definition written out directly: lobe density times
    // hemisphere indicator.
    const double oracle = test::grid_sphere_integral([&](const Eigen::Vector3d& l) {
      return std::max(0.0, np.dot(l)) / std::numbers::pi * (nf.dot(l) > 0 ? 1.0 : 0.0);
    });
    EXPECT_NEAR(oracle, born_probability(phi, psi), 2e-3);
    const double quad = predict_probability(ks, psi, {}, phi, {}, IntegrationEngine::quadrature(17)).value;
    EXPECT_NEAR(quad, oracle, 2e-3);
    EXPECT_NEAR(quad, born_probability(phi, psi), 1e-9);
  }
}

TEST(Bell2, ThresholdExamples) {
  const OntologicalModel m = make_bell2();
  const PureState e0 = PureState::basis(2, 0);
  const PureState e1 = PureState::basis(2, 1);
  // e1 has the lexicographically smaller Bloch vector, so it is the first outcome.
  ASSERT_TRUE(bell2_first(e0).same_ray(e1));
  ASSERT_TRUE(bell2_first(e1).same_ray(e1));
  const PureState psi = test::from_reals({std::sqrt(0.7), std::sqrt(0.3)});
  ASSERT_NEAR(born_probability(e1, psi), 0.3, 1e-15);
  auto at = [&](double x) {
    CVector aux(1);
    aux(0) = x;
    return OnticPoint{CompositePoint{psi, aux}};
  };
  const MeasContext z{"z", {e0, e1}};
  EXPECT_EQ(m.evaluate(e1, at(0.2), z), 1.0);
  EXPECT_EQ(m.evaluate(e0, at(0.2), z), 0.0);
  EXPECT_EQ(m.evaluate(e1, at(0.9), z), 0.0);
  EXPECT_EQ(m.evaluate(e0, at(0.9), z), 1.0);
  // Prepared state equal to the first outcome: threshold 1, every x passes.
  for (double x : {0.01, 0.5, 0.99}) {
    CVector aux(1);
    aux(0) = x;
    EXPECT_EQ(m.evaluate(e1, CompositePoint{e1, aux}, z), 1.0);
  }
}

TEST(WS, OutcomeRule) {
  CVector a(2), b(2);
  a << 0.8, 0.6;
  b << 1.0, 2.0;
  EXPECT_EQ(ws_outcome(a, b), 0);
  b << 1.0, 0.0;  // infinite ratio wins
  EXPECT_EQ(ws_outcome(a, b), 1);
  a << 0.0, 0.6;
  b << 0.0, 2.0;  // a = b = 0 counts as ratio 0
  EXPECT_EQ(ws_outcome(a, b), 1);
  a << 0.5, 0.5;
  b << 1.0, 1.0;  // tie: lowest index
  EXPECT_EQ(ws_outcome(a, b), 0);
  CVector c(3);
  EXPECT_THROW(ws_outcome(a, c), DimensionMismatch);
}

TEST(WS, BasisStateAlwaysGivesItsOutcome) {
  const OntologicalModel m = make_ws(3);
  const auto basis = computational_basis(3);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CounterRng rng(4, 0, i);
    const int k = static_cast<int>(rng.below(3));
    const CVector aux = m.space.sample_aux(rng);
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(m.evaluate(basis[j], CompositePoint{basis[k], aux}, {"z", basis}), j == k ? 1.0 : 0.0);
    }
  }
}

TEST(WS, DeterministicOnAMillionTriples) {
  const OntologicalModel m = make_ws(3);
  std::uint64_t bad = 0;
  for (std::uint64_t i = 0; i < 1'000'000; ++i) {
    CounterRng rng(6, 0, i);
    const PureState psi = PureState::random(3, rng);
    const CVector aux = m.space.sample_aux(rng);
    const auto basis = random_basis(3, rng);
    const MeasContext ctx{"random", basis};
    const double v = m.evaluate(basis[rng.below(3)], CompositePoint{psi, aux}, ctx);
    if (v != 0.0 && v != 1.0) ++bad;
  }
  EXPECT_EQ(bad, 0u);
}

TEST(WS, OverlapFractionRegression) {
  const OntologicalModel m = make_ws(3);
  CounterRng rng(8, 0);
  const PureState phi = PureState::random(3, rng);
  const PureState psi = PureState::random(3, rng);
  const Estimate f = overlap_fraction(m, phi, psi, IntegrationEngine::monte_carlo(200000, 8));
  EXPECT_GE(f.value, 0.0);
  EXPECT_LT(f.value, 1.0);
  EXPECT_NEAR(f.value, 0.0, 1e-12);  // point masses on distinct rays never meet
}
