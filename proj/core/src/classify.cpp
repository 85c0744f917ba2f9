#include "ontokit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ontokit/sphere_quadrature.hpp"

namespace ontokit {

namespace {

// Stream ids keep the random inputs of different checks independent under
// one seed.
constexpr std::uint64_t kStreamCertainty = 11;
constexpr std::uint64_t kStreamSupport = 12;
constexpr std::uint64_t kStreamReciprocity = 21;
constexpr std::uint64_t kStreamDeterminism = 22;
constexpr std::uint64_t kStreamMeasurement = 23;
constexpr std::uint64_t kStreamFunctional = 24;
constexpr std::uint64_t kStreamMaxEpistemic = 25;
constexpr std::uint64_t kStreamPreparation = 26;
constexpr std::uint64_t kStreamBorn = 31;

constexpr double kPointTol = 1e-9;
constexpr double kPrepThreshold = 0.01;

std::string describe_state(const PureState& s) { return describe(RayPoint{s}); }

std::string describe_basis(const std::vector<PureState>& basis) {
  std::string out = "[";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i) out += ", ";
    out += describe_state(basis[i]);
  }
  return out + "]";
}

int state_dim(const OntologicalModel& m) { return m.dim; }

// Alternate between the reference measure and the preparation of a random
// state, so that both generic points and points inside some Lambda_chi are
// probed.
OnticPoint probe_point(const OntologicalModel& m, CounterRng& rng, std::uint64_t index) {
  if (index % 2 == 0) return m.space.sample_reference(rng);
  const PureState chi = PureState::random(state_dim(m), rng);
  return m.prepare_pure(chi).sample(rng);
}

Witness make_witness(const char* pred, std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  Witness w;
  w.predicate = pred;
  w.seed = seed;
  w.stream = stream;
  w.index = index;
  return w;
}

void finalize(PredicateResult& r, bool declared_true) {
  if (r.witness) {
    r.status = Status::Falsified;
  } else {
    r.status = declared_true ? Status::ConfirmedAnalytic : Status::NotFalsified;
  }
}

template <class Trial>
PredicateResult run_trials(std::uint64_t n, std::uint64_t seed, Trial&& trial) {
  PredicateResult r;
  r.seed = seed;
  for (std::uint64_t i = 0; i < n; ++i) {
    ++r.n_trials;
    if (auto w = trial(i)) {
      r.witness = std::move(w);
      break;
    }
  }
  return r;
}

std::optional<Witness> reciprocity_trial(const OntologicalModel& m, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, kStreamReciprocity, index);
  const PureState psi = PureState::random(state_dim(m), rng);
  const MeasContext ctx{"random-completion", random_completing_basis(psi, rng)};
  const EpistemicState mu = m.prepare_pure(psi);
  const OnticPoint lambda = index % 2 == 0 ? m.space.sample_reference(rng) : mu.sample(rng);
  const bool core = m.core(psi, lambda, ctx);
  const bool prepared = mu.in_support(lambda);
  if (core == prepared) return std::nullopt;
  Witness w = make_witness(predicate::kReciprocity, seed, kStreamReciprocity, index);
  w.psi = describe_state(psi);
  w.phi = w.psi;
  w.lambda = describe(lambda);
  w.contexts = describe_basis(ctx.basis);
  w.observed = m.evaluate(psi, lambda, ctx);
  w.expected = prepared ? 1.0 : 0.0;
  w.detail = core ? "lambda in Core(xi_psi) but outside Lambda_psi" : "lambda in Lambda_psi but outside Core(xi_psi)";
  return w;
}

std::optional<Witness> determinism_trial(const OntologicalModel& m, std::uint64_t seed, std::uint64_t index,
                                         const IntegrationEngine& engine, const std::vector<SphereNode>* nodes) {
  CounterRng rng(seed, kStreamDeterminism, index);
  const PureState phi = PureState::random(state_dim(m), rng);
  const MeasContext ctx{"random-completion", random_completing_basis(phi, rng)};
  OnticPoint lambda = nodes && !nodes->empty() ? OnticPoint{SpherePoint{(*nodes)[index % nodes->size()].point}}
                                               : probe_point(m, rng, index);
  const double v = m.evaluate(phi, lambda, ctx);
  const bool core = m.core(phi, lambda, ctx);
  const bool supp = m.support(phi, lambda, ctx);
  const bool binary = v <= kPointTol || v >= 1.0 - kPointTol;
  if (binary && core == supp) return std::nullopt;
  Witness w = make_witness(predicate::kDeterminism, seed, kStreamDeterminism, index);
  w.engine = engine.spec();
  w.engine_seed = engine.seed;
  w.phi = describe_state(phi);
  w.lambda = describe(lambda);
  w.contexts = describe_basis(ctx.basis);
  w.observed = v;
  w.detail = binary ? "Core(xi) != Supp(xi)" : "xi takes a value strictly between 0 and 1";
  return w;
}

std::vector<PureState> shuffled(std::vector<PureState> basis, CounterRng& rng) {
  for (std::size_t i = basis.size(); i > 1; --i) {
    std::swap(basis[i - 1], basis[rng.below(i)]);
  }
  return basis;
}

std::optional<Witness> measurement_trial(const OntologicalModel& m, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, kStreamMeasurement, index);
  const PureState phi = PureState::random(state_dim(m), rng);
  const OnticPoint lambda = probe_point(m, rng, index);
  const MeasContext a{"A", random_completing_basis(phi, rng)};
  const MeasContext b{"B", shuffled(random_completing_basis(phi, rng), rng)};
  const double va = m.evaluate(phi, lambda, a);
  const double vb = m.evaluate(phi, lambda, b);
  if (std::abs(va - vb) <= kPointTol) return std::nullopt;
  Witness w = make_witness(predicate::kMeasurementNoncontextual, seed, kStreamMeasurement, index);
  w.phi = describe_state(phi);
  w.lambda = describe(lambda);
  w.contexts = "A=" + describe_basis(a.basis) + " B=" + describe_basis(b.basis);
  w.observed = vb;
  w.expected = va;
  w.detail = "xi(phi|lambda) changes with the completion of phi";
  return w;
}

std::optional<Witness> functional_trial(const OntologicalModel& m, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, kStreamFunctional, index);
  const OnticPoint lambda = m.space.sample_reference(rng);
  const auto& c = std::get<CompositePoint>(lambda);
  const PureState other = PureState::random(state_dim(m), rng);
  const OnticPoint moved = CompositePoint{other, c.aux};
  const PureState phi = PureState::random(state_dim(m), rng);
  const MeasContext ctx{"random-completion", random_completing_basis(phi, rng)};
  const double v0 = m.evaluate(phi, lambda, ctx);
  const double v1 = m.evaluate(phi, moved, ctx);
  if (std::abs(v0 - v1) <= kPointTol) return std::nullopt;
  Witness w = make_witness(predicate::kFunctionalEpistemic, seed, kStreamFunctional, index);
  w.psi = describe_state(c.ray) + " -> " + describe_state(other);
  w.phi = describe_state(phi);
  w.lambda = describe(lambda);
  w.contexts = describe_basis(ctx.basis);
  w.observed = v1;
  w.expected = v0;
  w.detail = "xi changes when only the state component of lambda changes";
  return w;
}

std::optional<Witness> certainty_trial(const OntologicalModel& m, const PureState& psi, const MeasContext& sm,
                                       std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, kStreamCertainty, index);
  const EpistemicState mu = m.prepare_pure(psi);
  const OnticPoint lambda = mu.sample(rng);
  const bool inside = mu.in_support(lambda);
  const double v = m.evaluate(psi, lambda, sm);
  if (inside && v >= 1.0 - kPointTol) return std::nullopt;
  Witness w = make_witness(predicate::kQuantumCertainty, seed, kStreamCertainty, index);
  w.inputs.push_back(psi);
  const MeasContext resolved = m.resolve(psi, sm);
  w.inputs.insert(w.inputs.end(), resolved.basis.begin(), resolved.basis.end());
  w.psi = describe_state(psi);
  w.phi = w.psi;
  w.lambda = describe(lambda);
  w.contexts = sm.label;
  w.observed = v;
  w.expected = 1.0;
  w.detail = inside ? "prepared lambda fails the test for its own state" : "sampler left the support";
  return w;
}

std::optional<Witness> support_trial(const OntologicalModel& m, const PureState& psi, std::uint64_t seed,
                                     std::uint64_t index) {
  CounterRng rng(seed, kStreamSupport, index);
  const EpistemicState mu = m.prepare_pure(psi);
  const MeasContext ctx{};
  const OnticPoint lambda = index % 2 == 0 ? mu.sample(rng) : m.space.sample_reference(rng);
  const bool prepared = mu.in_support(lambda);
  const bool core = m.core(psi, lambda, ctx);
  const bool supp = m.support(psi, lambda, ctx);
  std::string broken;
  if (prepared && !core) broken = "Lambda_psi not inside Core(xi_psi)";
  if (core && !supp) broken = "Core(xi_psi) not inside Supp(xi_psi)";
  if (broken.empty()) return std::nullopt;
  Witness w = make_witness(predicate::kSupportChain, seed, kStreamSupport, index);
  w.inputs.push_back(psi);
  w.psi = describe_state(psi);
  w.lambda = describe(lambda);
  w.observed = m.evaluate(psi, lambda, ctx);
  w.detail = broken;
  return w;
}

struct PairTrial {
  std::optional<Witness> witness;
  double f = 1.0;
};

PairTrial max_epistemic_trial(const OntologicalModel& m, std::uint64_t seed, std::uint64_t index,
                              const IntegrationEngine& engine) {
  CounterRng rng(seed, kStreamMaxEpistemic, index);
  PureState psi = PureState::random(state_dim(m), rng);
  PureState phi = PureState::random(state_dim(m), rng);
  while (born_probability(phi, psi) < 1e-3) phi = PureState::random(state_dim(m), rng);
  const Estimate f = overlap_fraction(m, phi, psi, engine, (kStreamMaxEpistemic << 32) + index);
  PairTrial t;
  t.f = f.value;
  if (engine.accepts(1.0 - f.value, f.std_error)) return t;
  Witness w = make_witness(predicate::kMaximallyEpistemic, seed, kStreamMaxEpistemic, index);
  w.engine = engine.spec();
  w.engine_seed = engine.seed;
  w.psi = describe_state(psi);
  w.phi = describe_state(phi);
  w.observed = f.value;
  w.expected = 1.0;
  w.detail = "overlap fraction f(phi, psi) below 1";
  t.witness = std::move(w);
  return t;
}

std::optional<Witness> preparation_trial(const OntologicalModel& m, std::uint64_t seed,
                                         const IntegrationEngine& engine) {
  const auto [a, b] = standard_mixed_contexts(state_dim(m));
  const PrepDistance d = prep_context_distance(m, DensityOperator::maximally_mixed(state_dim(m)), a, b, engine);
  if (d.verdict != PrepVerdict::Contextual) return std::nullopt;
  Witness w = make_witness(predicate::kPreparationNoncontextual, seed, kStreamPreparation, 0);
  w.engine = engine.spec();
  w.engine_seed = engine.seed;
  w.psi = "I/" + std::to_string(state_dim(m));
  w.contexts = a.label + " vs " + b.label;
  w.observed = d.tv.value;
  w.expected = 0.0;
  w.detail = "total-variation distance between preparation distributions";
  return w;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::ConfirmedAnalytic:
      return "ConfirmedAnalytic";
    case Status::NotFalsified:
      return "NotFalsified";
    case Status::Falsified:
      return "Falsified";
    case Status::NotApplicable:
      return "NotApplicable";
  }
  return "?";
}

std::string to_string(PrepVerdict v) {
  switch (v) {
    case PrepVerdict::Noncontextual:
      return "noncontextual";
    case PrepVerdict::Indeterminate:
      return "indeterminate";
    case PrepVerdict::Contextual:
      return "contextual";
  }
  return "?";
}

Estimate predict_probability(const OntologicalModel& model, const PureState& psi, const PrepContext& sp,
                             const PureState& phi, const MeasContext& sm, const IntegrationEngine& engine,
                             std::uint64_t stream) {
  if (psi.dim() != phi.dim()) throw DimensionMismatch("psi and phi differ in dimension");
  const EpistemicState mu = model.prepare_pure(psi, sp);
  const MeasContext ctx = model.resolve(phi, sm);
  std::vector<Vec3> cuts;
  if (model.respond.cuts) cuts = model.respond.cuts(phi, ctx);
  return expectation(
      mu, [&](const OnticPoint& p) { return model.respond.evaluate(phi, p, ctx); }, cuts, engine, stream);
}

std::vector<Estimate> predict_distribution(const OntologicalModel& model, const PureState& psi,
                                           const PrepContext& sp, const std::vector<PureState>& basis,
                                           const IntegrationEngine& engine, std::uint64_t stream) {
  if (basis.empty()) throw std::invalid_argument("empty measurement basis");
  if (orthonormality_defect(basis) > kAlgebraTol) throw InvalidState("measurement basis is not orthonormal");
  const EpistemicState mu = model.prepare_pure(psi, sp);
  const MeasContext ctx{"basis", basis};
  std::vector<Vec3> cuts;
  if (model.respond.cuts) {
    for (const auto& b : basis) {
      for (const auto& c : model.respond.cuts(b, ctx)) cuts.push_back(c);
    }
  }
  return expectation(
      mu,
      [&](const OnticPoint& p, std::span<double> out) {
        for (std::size_t k = 0; k < basis.size(); ++k) out[k] = model.respond.evaluate(basis[k], p, ctx);
      },
      basis.size(), cuts, engine, stream);
}

BornReport verify_born(const OntologicalModel& model, const std::vector<PureState>& states,
                       const std::vector<std::vector<PureState>>& bases, const IntegrationEngine& engine) {
  if (states.empty() || bases.empty()) throw std::invalid_argument("verify_born needs states and bases");
  const std::size_t n = std::max(states.size(), bases.size());
  if ((states.size() != n && states.size() != 1) || (bases.size() != n && bases.size() != 1)) {
    throw std::invalid_argument("state and basis lists must have equal length or length 1");
  }
  BornReport rep;
  rep.model = model.name;
  rep.engine = engine.spec();
  for (std::size_t i = 0; i < n; ++i) {
    const PureState& psi = states[states.size() == 1 ? 0 : i];
    const auto& basis = bases[bases.size() == 1 ? 0 : i];
    const auto est = predict_distribution(model, psi, {}, basis, engine, (kStreamBorn << 32) + i);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      BornRow row;
      row.pair = i;
      row.outcome = static_cast<int>(k);
      row.predicted = est[k].value;
      row.born = born_probability(basis[k], psi);
      row.deviation = std::abs(row.predicted - row.born);
      row.std_error = est[k].std_error;
      row.ok = engine.accepts(row.deviation, row.std_error);
      rep.max_deviation = std::max(rep.max_deviation, row.deviation);
      if (row.std_error > 0.0) rep.max_sigma = std::max(rep.max_sigma, row.deviation / row.std_error);
      rep.pass = rep.pass && row.ok;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

PredicateResult check_quantum_certainty(const OntologicalModel& model, const PureState& psi, const PrepContext&,
                                        const MeasContext& sm, std::uint64_t n_samples, std::uint64_t seed) {
  const MeasContext ctx = model.resolve(psi, sm);
  auto r = run_trials(n_samples, seed, [&](std::uint64_t i) { return certainty_trial(model, psi, ctx, seed, i); });
  finalize(r, false);
  return r;
}

PredicateResult check_support_chain(const OntologicalModel& model, const PureState& psi, std::uint64_t n_samples,
                                    std::uint64_t seed) {
  auto r = run_trials(n_samples, seed, [&](std::uint64_t i) { return support_trial(model, psi, seed, i); });
  finalize(r, false);
  return r;
}

Estimate overlap_mass(const OntologicalModel& model, const PureState& phi, const PureState& psi,
                      const IntegrationEngine& engine, std::uint64_t stream) {
  const EpistemicState mu_phi = model.prepare_pure(phi);
  const EpistemicState mu_psi = model.prepare_pure(psi);
  return expectation(
      mu_psi, [&](const OnticPoint& p) { return mu_phi.in_support(p) ? 1.0 : 0.0; }, mu_phi.cuts(), engine,
      stream);
}

Estimate overlap_fraction(const OntologicalModel& model, const PureState& phi, const PureState& psi,
                          const IntegrationEngine& engine, std::uint64_t stream) {
  const double born = born_probability(phi, psi);
  if (born < 1e-12) throw OrthogonalPair("overlap fraction undefined for orthogonal states");
  const Estimate mass = overlap_mass(model, phi, psi, engine, stream);
  return {mass.value / born, mass.std_error / born};
}

PredicateResult check_reciprocity(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed) {
  auto r = run_trials(trials, seed, [&](std::uint64_t i) { return reciprocity_trial(model, seed, i); });
  finalize(r, model.declared.reciprocal);
  if (!r.witness && !model.declared.reciprocal) {
    r.note = "no lambda with xi(psi|lambda) = 1 outside Lambda_psi found within the budget";
  }
  return r;
}

PredicateResult check_determinism(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed,
                                  const IntegrationEngine& engine) {
  std::vector<SphereNode> nodes;
  if (engine.kind == IntegrationEngine::Kind::SphereQuadrature && model.space.kind() == OnticSpace::Kind::Sphere2) {
    nodes = sphere_product_rule(engine.level);
  }
  auto r = run_trials(trials, seed, [&](std::uint64_t i) {
    return determinism_trial(model, seed, i, engine, nodes.empty() ? nullptr : &nodes);
  });
  finalize(r, model.declared.outcome_deterministic);
  r.note = nodes.empty() ? "probe: reference and prepared draws" : "probe: quadrature nodes";
  return r;
}

PredicateResult check_measurement_noncontextuality(const OntologicalModel& model, std::uint64_t trials,
                                                   std::uint64_t seed) {
  auto r = run_trials(trials, seed, [&](std::uint64_t i) { return measurement_trial(model, seed, i); });
  finalize(r, !model.declared.measurement_contextual);
  return r;
}

PredicateResult functional_dependence_test(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed) {
  PredicateResult r;
  r.seed = seed;
  switch (model.space.kind()) {
    case OnticSpace::Kind::Ray:
      r.status = Status::NotApplicable;
      r.note = "lambda is the state itself; psi cannot vary at fixed lambda";
      return r;
    case OnticSpace::Kind::Sphere2:
    case OnticSpace::Kind::Atoms:
      r.status = model.respond.reads_state_component ? Status::NotFalsified : Status::ConfirmedAnalytic;
      r.note = "lambda carries no state component; xi reads only lambda and the outcome";
      return r;
    case OnticSpace::Kind::Composite:
      break;
  }
  r = run_trials(trials, seed, [&](std::uint64_t i) { return functional_trial(model, seed, i); });
  finalize(r, !model.declared.psi_dependent_response && !model.respond.reads_state_component);
  if (r.witness) r.note = "functionally psi-ontic: xi reads the state component of lambda";
  return r;
}

PrepContext named_mixed_context(int dim, const std::string& axis) {
  std::vector<PureState> basis;
  if (axis == "z") {
    basis = computational_basis(dim);
  } else if (dim == 2 && (axis == "x" || axis == "y")) {
    const Complex i1 = axis == "x" ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    CVector p(2), m(2);
    p << 1.0, i1;
    m << 1.0, -i1;
    basis = {PureState::normalized(p), PureState::normalized(m)};
  } else if (dim >= 3 && axis == "fourier") {
    basis = fourier_basis(dim);
  } else {
    throw std::invalid_argument("unknown decomposition '" + axis + "' for d=" + std::to_string(dim) +
                                " (use z, x, y for d=2; z, fourier otherwise)");
  }
  std::vector<WeightedState> parts;
  for (auto& b : basis) parts.push_back({1.0 / dim, std::move(b)});
  return PrepContext{axis + "-mixture", Decomposition(std::move(parts))};
}

std::pair<PrepContext, PrepContext> standard_mixed_contexts(int dim) {
  return {named_mixed_context(dim, "z"), named_mixed_context(dim, dim == 2 ? "x" : "fourier")};
}

PrepDistance prep_context_distance(const OntologicalModel& model, const DensityOperator& rho, const PrepContext& a,
                                   const PrepContext& b, const IntegrationEngine& engine) {
  for (const PrepContext* c : {&a, &b}) {
    if (!c->decomposition) throw ContextMismatch("context '" + c->label + "' carries no decomposition");
    if (!mix(*c->decomposition).approx_equal(rho, kAlgebraTol)) {
      throw ContextMismatch("context '" + c->label + "' does not prepare the given density operator");
    }
  }
  const EpistemicState ma = model.prepare_decomposition(*a.decomposition, a);
  const EpistemicState mb = model.prepare_decomposition(*b.decomposition, b);
  PrepDistance d;
  d.tv = total_variation(ma, mb, engine, kStreamPreparation);
  const double band = engine.kind == IntegrationEngine::Kind::MonteCarlo ? 3.0 * d.tv.std_error + 1e-12
                                                                         : engine.tolerance + d.tv.std_error;
  if (d.tv.value > kPrepThreshold) {
    d.verdict = PrepVerdict::Contextual;
  } else if (d.tv.value <= band) {
    d.verdict = PrepVerdict::Noncontextual;
  } else {
    d.verdict = PrepVerdict::Indeterminate;
  }
  return d;
}

PredicateResult check_preparation_noncontextuality(const OntologicalModel& model, std::uint64_t seed,
                                                   const IntegrationEngine& engine) {
  PredicateResult r;
  r.seed = seed;
  r.n_trials = 1;
  try {
    r.witness = preparation_trial(model, seed, engine);
  } catch (const EngineUnsupported& e) {
    r.status = Status::NotApplicable;
    r.note = e.what();
    return r;
  }
  finalize(r, false);
  if (!r.witness) {
    const auto [a, b] = standard_mixed_contexts(state_dim(model));
    const auto d = prep_context_distance(model, DensityOperator::maximally_mixed(state_dim(model)), a, b, engine);
    if (d.verdict == PrepVerdict::Indeterminate) r.note = "indeterminate: small nonzero distance";
  }
  return r;
}

ClassificationReport classify(const OntologicalModel& model, const Budget& budget) {
  const IntegrationEngine engine = budget.engine ? *budget.engine : default_engine(model.space, budget.seed);
  ClassificationReport rep;
  rep.model = model.name;
  rep.dim = model.dim;
  rep.seed = budget.seed;
  rep.n_trials = budget.trials;
  rep.engine = engine.spec();
  auto& p = rep.predicates;
  p[predicate::kReciprocity] = check_reciprocity(model, budget.trials, budget.seed);
  p[predicate::kDeterminism] = check_determinism(model, budget.trials, budget.seed, engine);
  p[predicate::kMeasurementNoncontextual] = check_measurement_noncontextuality(model, budget.trials, budget.seed);
  p[predicate::kPreparationNoncontextual] = check_preparation_noncontextuality(model, budget.seed, engine);
  p[predicate::kFunctionalEpistemic] = functional_dependence_test(model, budget.trials, budget.seed);

  // Deficiency is nonreciprocity OR indeterminism, never probed on its own.
  const auto& rec = p[predicate::kReciprocity];
  const auto& det = p[predicate::kDeterminism];
  PredicateResult nd;
  nd.seed = budget.seed;
  nd.n_trials = rec.n_trials + det.n_trials;
  nd.note = "derived: reciprocity AND determinism";
  if (rec.falsified() || det.falsified()) {
    nd.status = Status::Falsified;
    nd.witness = rec.falsified() ? rec.witness : det.witness;
  } else if (rec.status == Status::ConfirmedAnalytic && det.status == Status::ConfirmedAnalytic) {
    nd.status = Status::ConfirmedAnalytic;
  } else {
    nd.status = Status::NotFalsified;
  }
  p[predicate::kNonDeficient] = nd;
  return rep;
}

MaxEpistemicReport is_maximally_epistemic(const OntologicalModel& model, std::uint64_t n_pairs,
                                          const IntegrationEngine& engine, std::uint64_t seed,
                                          std::uint64_t predicate_trials) {
  MaxEpistemicReport rep;
  rep.result.seed = seed;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    ++rep.result.n_trials;
    PairTrial t = max_epistemic_trial(model, seed, i, engine);
    rep.min_f = std::min(rep.min_f, t.f);
    if (t.witness) {
      rep.result.witness = std::move(t.witness);
      break;
    }
  }
  rep.pairs = rep.result.n_trials;
  finalize(rep.result, model.declared.reciprocal && model.declared.outcome_deterministic);

  rep.reciprocity = check_reciprocity(model, predicate_trials, seed);
  rep.determinism = check_determinism(model, predicate_trials, seed, engine);
  rep.measurement_noncontextuality = check_measurement_noncontextuality(model, predicate_trials, seed);
  const bool f_one = !rep.result.falsified();
  const bool rec_det = !rep.reciprocity.falsified() && !rep.determinism.falsified();
  rep.equivalence_consistent = f_one == rec_det;
  if (rep.result.status == Status::ConfirmedAnalytic) {
    rep.corollary_consistent = !rep.measurement_noncontextuality.falsified();
  }
  if (!rep.equivalence_consistent) {
    rep.note = std::string("framework error: f = 1 verdict (") + yes_no(f_one) +
               ") disagrees with reciprocity AND determinism (" + yes_no(rec_det) + ")";
  } else if (!rep.corollary_consistent) {
    rep.note = "framework error: maximally epistemic model is measurement contextual";
  }
  return rep;
}

KsOmReport ks_om_consistency(const std::vector<OntologicalModel>& models, const Budget& budget) {
  KsOmReport rep;
  for (const auto& m : models) {
    KsOmEntry e;
    e.model = m.name;
    e.dim = m.dim;
    if (m.dim < 3) {
      e.skipped = true;
      rep.entries.push_back(e);
      continue;
    }
    rep.vacuous = false;
    const auto c = classify(m, budget);
    e.deterministic = c.deterministic();
    e.measurement_contextual = c.measurement_contextual();
    e.ok = !(e.deterministic && !e.measurement_contextual);
    rep.pass = rep.pass && e.ok;
    rep.entries.push_back(e);
  }
  return rep;
}

std::optional<Witness> replay(const OntologicalModel& model, const Witness& w) {
  const auto engine = [&] { return IntegrationEngine::parse(w.engine.empty() ? "closed" : w.engine, w.engine_seed); };
  if (w.predicate == predicate::kReciprocity) return reciprocity_trial(model, w.seed, w.index);
  if (w.predicate == predicate::kDeterminism) {
    const auto e = engine();
    std::vector<SphereNode> nodes;
    if (e.kind == IntegrationEngine::Kind::SphereQuadrature && model.space.kind() == OnticSpace::Kind::Sphere2) {
      nodes = sphere_product_rule(e.level);
    }
    return determinism_trial(model, w.seed, w.index, e, nodes.empty() ? nullptr : &nodes);
  }
  if (w.predicate == predicate::kMeasurementNoncontextual) return measurement_trial(model, w.seed, w.index);
  if (w.predicate == predicate::kFunctionalEpistemic) return functional_trial(model, w.seed, w.index);
  if (w.predicate == predicate::kMaximallyEpistemic) return max_epistemic_trial(model, w.seed, w.index, engine()).witness;
  if (w.predicate == predicate::kPreparationNoncontextual) return preparation_trial(model, w.seed, engine());
  if (w.predicate == predicate::kQuantumCertainty) {
    if (w.inputs.size() < 2) throw std::invalid_argument("certainty witness lacks its inputs");
    const MeasContext ctx{"replay", std::vector<PureState>(w.inputs.begin() + 1, w.inputs.end())};
    return certainty_trial(model, w.inputs.front(), ctx, w.seed, w.index);
  }
  if (w.predicate == predicate::kSupportChain) {
    if (w.inputs.empty()) throw std::invalid_argument("support-chain witness lacks its state");
    return support_trial(model, w.inputs.front(), w.seed, w.index);
  }
  throw std::invalid_argument("cannot replay predicate '" + w.predicate + "'");
}

TableReport build_table(const std::vector<TableEntry>& rows, const std::map<int, OntologicalModel>& models,
                        const Budget& budget) {
  TableReport rep;
  rep.seed = budget.seed;
  rep.n_trials = budget.trials;
  for (const auto& entry : rows) {
    TableRowResult r;
    r.reference = entry;
    r.expected = {entry.reciprocal, entry.deterministic, entry.contextual};
    const auto it = models.find(entry.row);
    if (it == models.end() && entry.model_name.empty()) {
      rep.rows.push_back(r);
      continue;
    }
    const OntologicalModel model = it != models.end() ? it->second : make_model(entry.model_name);
    r.implemented = true;
    r.declared = Triple{model.declared.reciprocal, model.declared.outcome_deterministic,
                        model.declared.measurement_contextual};
    const auto c = classify(model, budget);
    r.measured = Triple{c.reciprocal(), c.deterministic(), c.measurement_contextual()};
    auto column = [&](const char* name, bool m, bool d, bool e) {
      if (m == d && m == e) return;
      if (!r.diff.empty()) r.diff += "; ";
      r.diff += std::string(name) + ": measured " + yes_no(m) + ", declared " + yes_no(d) + ", expected " + yes_no(e);
    };
    column("reciprocity", r.measured->reciprocal, r.declared->reciprocal, r.expected.reciprocal);
    column("determinism", r.measured->deterministic, r.declared->deterministic, r.expected.deterministic);
    column("contextual", r.measured->contextual, r.declared->contextual, r.expected.contextual);
    r.matches = r.diff.empty();
    rep.pass = rep.pass && r.matches;
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace ontokit
