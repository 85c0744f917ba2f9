#include <gtest/gtest.h>

#include <cmath>

#include "ontokit/classify.hpp"
#include "ontokit/zoo.hpp"

using namespace ontokit;

namespace {

const Budget kBudget{.trials = 1000, .seed = 1, .engine = std::nullopt};

// KS model whose response misses a band near the edge of each hemisphere,
// so quantum certainty fails.
OntologicalModel shrunk_ks() {
  OntologicalModel m = make_ks();
  m.name = "ks-shrunk";
  m.respond.evaluate = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return to_bloch(phi).vec().dot(std::get<SpherePoint>(p).n) > 0.2 ? 1.0 : 0.0;
  };
  m.respond.core = [f = m.respond.evaluate](const PureState& o, const OnticPoint& p, const MeasContext& c) {
    return f(o, p, c) == 1.0;
  };
  m.respond.support = m.respond.core;
  return m;
}

// KS model whose declared core is smaller than its true one.
OntologicalModel small_core_ks() {
  OntologicalModel m = make_ks();
  m.name = "ks-small-core";
  m.respond.core = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return to_bloch(phi).vec().dot(std::get<SpherePoint>(p).n) > 0.5;
  };
  return m;
}

// Deterministic and noncontextual in d = 3: xi(phi|lambda) = [lambda = phi].
// It cannot reproduce Born statistics, which is exactly why the KS-OM
// check must reject it.
OntologicalModel fake_d3() {
  OntologicalModel m = make_bb(3);
  m.name = "fake:3";
  m.respond.evaluate = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return std::get<RayPoint>(p).ray.same_ray(phi) ? 1.0 : 0.0;
  };
  m.respond.core = [](const PureState& phi, const OnticPoint& p, const MeasContext&) {
    return std::get<RayPoint>(p).ray.same_ray(phi);
  };
  m.respond.support = m.respond.core;
  m.declared.outcome_deterministic = true;
  return m;
}

}  // namespace

TEST(Structure, CertaintyAndSupportChainHoldForZoo) {
  for (const auto& m : zoo()) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      CounterRng rng(10, 0, i);
      const PureState psi = PureState::random(m.dim, rng);
      EXPECT_FALSE(check_quantum_certainty(m, psi, {}, {}, 2000, i).falsified()) << m.name;
      EXPECT_FALSE(check_support_chain(m, psi, 2000, i).falsified()) << m.name;
    }
  }
}

TEST(Structure, BrokenFixturesAreCaught) {
  const PureState psi = PureState::basis(2, 0);
  const PredicateResult cert = check_quantum_certainty(shrunk_ks(), psi, {}, {}, 2000, 1);
  ASSERT_TRUE(cert.falsified());
  ASSERT_TRUE(cert.witness.has_value());
  EXPECT_EQ(cert.witness->observed, 0.0);
  EXPECT_TRUE(check_support_chain(shrunk_ks(), psi, 2000, 1).falsified());
  EXPECT_TRUE(check_support_chain(small_core_ks(), psi, 2000, 1).falsified());
}

TEST(Classify, TableVerdicts) {
  struct Row {
    const char* model;
    bool r, d, c;
  };
  for (const Row& row : {Row{"bb:3", true, false, false}, Row{"ks", true, true, false}, Row{"bell2", false, true, false},
                         Row{"ws:3", false, true, true}}) {
    const ClassificationReport rep = classify(make_model(row.model), kBudget);
    EXPECT_EQ(rep.reciprocal(), row.r) << row.model;
    EXPECT_EQ(rep.deterministic(), row.d) << row.model;
    EXPECT_EQ(rep.measurement_contextual(), row.c) << row.model;
    // Deficiency is derived, never measured on its own.
    EXPECT_EQ(rep.deficient(), !rep.reciprocal() || !rep.deterministic()) << row.model;
  }
}

TEST(Classify, FunctionalDependence) {
  EXPECT_EQ(functional_dependence_test(make_ks(), 500, 1).status, Status::ConfirmedAnalytic);
  EXPECT_TRUE(functional_dependence_test(make_ws(3), 500, 1).falsified());
  EXPECT_TRUE(functional_dependence_test(make_bell2(), 500, 1).falsified());
  const PredicateResult bb = functional_dependence_test(make_bb(3), 500, 1);
  EXPECT_EQ(bb.status, Status::NotApplicable);
  EXPECT_FALSE(bb.note.empty());
}

TEST(Classify, DeterminismVerdictIsEngineIndependent) {
  for (const auto& m : zoo()) {
    const bool mc = check_determinism(m, 1000, 1, IntegrationEngine::monte_carlo(10000, 1)).falsified();
    const bool quad = check_determinism(m, 1000, 1, IntegrationEngine::quadrature(17)).falsified();
    EXPECT_EQ(mc, quad) << m.name;
  }
}

TEST(Classify, WitnessesReplay) {
  std::size_t replayed = 0;
  for (const auto& m : zoo()) {
    const ClassificationReport rep = classify(m, kBudget);
    for (const auto& [name, r] : rep.predicates) {
      if (!r.witness) continue;
      const auto again = replay(m, *r.witness);
      ASSERT_TRUE(again.has_value()) << m.name << " " << name;
      EXPECT_EQ(again->observed, r.witness->observed) << m.name << " " << name;
      EXPECT_EQ(again->detail, r.witness->detail);
      ++replayed;
    }
  }
  EXPECT_GT(replayed, 5u);
}

TEST(Classify, SameSeedSameReport) {
  const auto a = classify(make_ws(3), kBudget);
  const auto b = classify(make_ws(3), kBudget);
  for (const auto& [name, r] : a.predicates) {
    EXPECT_EQ(r.status, b.at(name).status);
    EXPECT_EQ(r.witness.has_value(), b.at(name).witness.has_value());
    if (r.witness) {
      EXPECT_EQ(r.witness->index, b.at(name).witness->index);
    }
  }
}

TEST(MaxEpistemic, ZooVerdicts) {
  const auto ks = is_maximally_epistemic(make_ks(), 100, IntegrationEngine::quadrature(17), 1, 1000);
  EXPECT_EQ(ks.result.status, Status::ConfirmedAnalytic);
  EXPECT_NEAR(ks.min_f, 1.0, 1e-6);
  EXPECT_FALSE(ks.measurement_noncontextuality.falsified());
  EXPECT_TRUE(ks.corollary_consistent);

  const auto bb = is_maximally_epistemic(make_bb(3), 20, IntegrationEngine::closed_form(), 1, 1000);
  ASSERT_TRUE(bb.result.falsified());
  EXPECT_EQ(bb.result.witness->observed, 0.0);

  const auto ws = is_maximally_epistemic(make_ws(3), 20, IntegrationEngine::monte_carlo(20000, 1), 1, 1000);
  EXPECT_TRUE(ws.result.falsified());

  for (const auto& m : zoo()) {
    const auto r = is_maximally_epistemic(m, 10, default_engine(m.space, 1), 1, 1000);
    EXPECT_TRUE(r.equivalence_consistent) << m.name;
    EXPECT_TRUE(r.corollary_consistent) << m.name;
  }
}

TEST(MaxEpistemic, OverlapNeverExceedsBorn) {
  for (const auto& m : zoo()) {
    const IntegrationEngine eng = m.space.kind() == OnticSpace::Kind::Composite
                                      ? IntegrationEngine::monte_carlo(20000, 2)
                                      : default_engine(m.space, 2);
    for (std::uint64_t i = 0; i < 10; ++i) {
      CounterRng rng(12, 0, i);
      const PureState phi = PureState::random(m.dim, rng);
      const PureState psi = PureState::random(m.dim, rng);
      const Estimate mass = overlap_mass(m, phi, psi, eng, i);
      const Estimate p = predict_probability(m, psi, {}, phi, {}, eng, i);
      EXPECT_LE(mass.value, p.value + 3 * (mass.std_error + p.std_error) + 1e-9) << m.name;
    }
  }
}

TEST(MaxEpistemic, OrthogonalPairThrows) {
  EXPECT_THROW(overlap_fraction(make_ks(), PureState::basis(2, 0), PureState::basis(2, 1),
                                IntegrationEngine::quadrature(17)),
               OrthogonalPair);
}

TEST(PrepContext, KsDistanceAndValidation) {
  const OntologicalModel ks = make_ks();
  const auto rho = DensityOperator::maximally_mixed(2);
  const auto [z, x] = standard_mixed_contexts(2);
  EXPECT_LE(mix(*z.decomposition).distance(rho), 1e-12);
  EXPECT_LE(mix(*x.decomposition).distance(rho), 1e-12);
  const PrepDistance d = prep_context_distance(ks, rho, z, x, IntegrationEngine::quadrature(17));
  EXPECT_GT(d.tv.value, 0.1);
  EXPECT_EQ(d.verdict, PrepVerdict::Contextual);
  EXPECT_NEAR(prep_context_distance(ks, rho, z, z, IntegrationEngine::quadrature(17)).tv.value, 0.0, 1e-12);

  const DensityOperator pure_up = DensityOperator::pure(PureState::basis(2, 0));
  EXPECT_THROW(prep_context_distance(ks, pure_up, z, x, IntegrationEngine::quadrature(17)), ContextMismatch);
}

TEST(PrepContext, BBRegression) {
  const auto [z, x] = standard_mixed_contexts(2);
  const PrepDistance d =
      prep_context_distance(make_bb(2), DensityOperator::maximally_mixed(2), z, x, IntegrationEngine::closed_form());
  EXPECT_EQ(d.tv.value, 1.0);
}

TEST(PrepContext, HigherDimensionUsesFourier) {
  const auto [z, f] = standard_mixed_contexts(3);
  EXPECT_LE(mix(*f.decomposition).distance(DensityOperator::maximally_mixed(3)), 1e-12);
  EXPECT_THROW(named_mixed_context(3, "x"), std::invalid_argument);
}

TEST(KsOm, ZooPassesAndFakeFails) {
  const auto zoo_rep = ks_om_consistency(zoo(), kBudget);
  EXPECT_TRUE(zoo_rep.pass);
  EXPECT_FALSE(zoo_rep.vacuous);
  const auto ks_only = ks_om_consistency({make_ks()}, kBudget);
  EXPECT_TRUE(ks_only.pass);
  EXPECT_TRUE(ks_only.vacuous);
  const auto fake = ks_om_consistency({make_bb(3), fake_d3()}, kBudget);
  EXPECT_FALSE(fake.pass);
}

TEST(Table, ReproducesAndCatchesCorruption) {
  const TableReport ok = build_table(reference_table(), {}, kBudget);
  EXPECT_TRUE(ok.pass);
  int measured = 0;
  for (const auto& row : ok.rows) measured += row.implemented;
  EXPECT_EQ(measured, 4);

  OntologicalModel ks = make_ks();
  ks.declared.outcome_deterministic = false;
  std::map<int, OntologicalModel> over;
  over.emplace(2, ks);
  const TableReport bad = build_table(reference_table(), over, kBudget);
  EXPECT_FALSE(bad.pass);
  EXPECT_NE(bad.rows[1].diff.find("determinism"), std::string::npos);
}
