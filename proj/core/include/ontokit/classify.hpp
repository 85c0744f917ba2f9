#pragma once

// Checks of the defining properties of an ontological model, by analytic
// declaration plus seeded randomized falsification.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ontokit/engine.hpp"
#include "ontokit/framework.hpp"
#include "ontokit/zoo.hpp"

namespace ontokit {

enum class Status { ConfirmedAnalytic, NotFalsified, Falsified, NotApplicable };
std::string to_string(Status s);

namespace predicate {
inline constexpr const char* kReciprocity = "reciprocity";
inline constexpr const char* kDeterminism = "outcome_determinism";
inline constexpr const char* kMeasurementNoncontextual = "measurement_noncontextuality";
inline constexpr const char* kPreparationNoncontextual = "preparation_noncontextuality";
inline constexpr const char* kFunctionalEpistemic = "functional_psi_epistemic";
inline constexpr const char* kNonDeficient = "non_deficiency";
inline constexpr const char* kMaximallyEpistemic = "maximal_psi_epistemicity";
inline constexpr const char* kQuantumCertainty = "quantum_certainty";
inline constexpr const char* kSupportChain = "support_chain";
}  // namespace predicate

/// Everything needed to re-run the trial that produced a violation.
struct Witness {
  std::string predicate;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t index = 0;
  std::string engine;
  std::uint64_t engine_seed = 0;
  /// Caller-supplied inputs for checks that are not fully seed-driven:
  /// the prepared state followed by the measurement basis.
  std::vector<PureState> inputs;
  std::string psi;
  std::string phi;
  std::string lambda;
  std::string contexts;
  double observed = 0.0;
  double expected = 0.0;
  std::string detail;
};

struct PredicateResult {
  Status status = Status::NotFalsified;
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  std::optional<Witness> witness;
  std::string note;

  bool falsified() const { return status == Status::Falsified; }
};

struct Budget {
  std::uint64_t trials = 2000;
  std::uint64_t seed = 1;
  /// Unset means default_engine(model.space).
  std::optional<IntegrationEngine> engine;
};

// -- prediction --------------------------------------------------------------

Estimate predict_probability(const OntologicalModel& model, const PureState& psi, const PrepContext& sp,
                             const PureState& phi, const MeasContext& sm, const IntegrationEngine& engine,
                             std::uint64_t stream = 0);

/// Predicted outcome distribution over a whole basis (one integration pass).
std::vector<Estimate> predict_distribution(const OntologicalModel& model, const PureState& psi,
                                           const PrepContext& sp, const std::vector<PureState>& basis,
                                           const IntegrationEngine& engine, std::uint64_t stream = 0);

struct BornRow {
  std::size_t pair = 0;
  int outcome = 0;
  double predicted = 0.0;
  double born = 0.0;
  double deviation = 0.0;
  double std_error = 0.0;
  bool ok = true;
};

struct BornReport {
  std::string model;
  std::string engine;
  std::vector<BornRow> rows;
  double max_deviation = 0.0;
  /// Largest |deviation| / std_error over rows with a positive error.
  double max_sigma = 0.0;
  bool pass = true;
};

/// Pairs states[i] with bases[i]; a single state or single basis is
/// broadcast against the other list.
BornReport verify_born(const OntologicalModel& model, const std::vector<PureState>& states,
                       const std::vector<std::vector<PureState>>& bases, const IntegrationEngine& engine);

// -- mandatory structure -----------------------------------------------------

PredicateResult check_quantum_certainty(const OntologicalModel& model, const PureState& psi, const PrepContext& sp,
                                        const MeasContext& sm, std::uint64_t n_samples, std::uint64_t seed);

PredicateResult check_support_chain(const OntologicalModel& model, const PureState& psi, std::uint64_t n_samples,
                                    std::uint64_t seed);

/// Integral of mu_psi over the support of mu_phi, as a mass (not divided).
Estimate overlap_mass(const OntologicalModel& model, const PureState& phi, const PureState& psi,
                      const IntegrationEngine& engine, std::uint64_t stream = 0);

class OrthogonalPair : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// overlap_mass / |<phi|psi>|^2. Throws OrthogonalPair when the denominator
/// vanishes.
Estimate overlap_fraction(const OntologicalModel& model, const PureState& phi, const PureState& psi,
                          const IntegrationEngine& engine, std::uint64_t stream = 0);

// -- classification ----------------------------------------------------------

PredicateResult check_reciprocity(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed);
PredicateResult check_determinism(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed,
                                  const IntegrationEngine& engine);
PredicateResult check_measurement_noncontextuality(const OntologicalModel& model, std::uint64_t trials,
                                                   std::uint64_t seed);
PredicateResult functional_dependence_test(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed);

enum class PrepVerdict { Noncontextual, Indeterminate, Contextual };
std::string to_string(PrepVerdict v);

struct PrepDistance {
  Estimate tv;
  PrepVerdict verdict = PrepVerdict::Noncontextual;
};

class ContextMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Contexts must carry decompositions that both mix to rho within 1e-12.
PrepDistance prep_context_distance(const OntologicalModel& model, const DensityOperator& rho, const PrepContext& a,
                                   const PrepContext& b, const IntegrationEngine& engine);

/// The two standard decompositions of I/d: computational basis and, for
/// d = 2, the x basis; for d >= 3 the Fourier basis.
std::pair<PrepContext, PrepContext> standard_mixed_contexts(int dim);
PrepContext named_mixed_context(int dim, const std::string& axis);

PredicateResult check_preparation_noncontextuality(const OntologicalModel& model, std::uint64_t seed,
                                                   const IntegrationEngine& engine);

struct ClassificationReport {
  std::string model;
  int dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_trials = 0;
  std::string engine;
  std::map<std::string, PredicateResult> predicates;

  const PredicateResult& at(const std::string& name) const { return predicates.at(name); }
  bool reciprocal() const { return !at(predicate::kReciprocity).falsified(); }
  bool deterministic() const { return !at(predicate::kDeterminism).falsified(); }
  bool measurement_contextual() const { return at(predicate::kMeasurementNoncontextual).falsified(); }
  bool preparation_contextual() const { return at(predicate::kPreparationNoncontextual).falsified(); }
  bool deficient() const { return at(predicate::kNonDeficient).falsified(); }
};

ClassificationReport classify(const OntologicalModel& model, const Budget& budget = {});

struct MaxEpistemicReport {
  PredicateResult result;
  double min_f = 1.0;
  std::uint64_t pairs = 0;
  PredicateResult reciprocity;
  PredicateResult determinism;
  PredicateResult measurement_noncontextuality;
  /// The f = 1 verdict agrees with (reciprocal AND deterministic).
  bool equivalence_consistent = true;
  /// A confirmed maximally epistemic model is measurement noncontextual.
  bool corollary_consistent = true;
  std::string note;
};

MaxEpistemicReport is_maximally_epistemic(const OntologicalModel& model, std::uint64_t n_pairs,
                                          const IntegrationEngine& engine, std::uint64_t seed,
                                          std::uint64_t predicate_trials = 2000);

struct KsOmEntry {
  std::string model;
  int dim = 0;
  bool skipped = false;
  bool deterministic = false;
  bool measurement_contextual = false;
  bool ok = true;
};

struct KsOmReport {
  bool pass = true;
  bool vacuous = true;
  std::vector<KsOmEntry> entries;
};

/// No model of dimension >= 3 may come out deterministic and measurement
/// noncontextual.
KsOmReport ks_om_consistency(const std::vector<OntologicalModel>& models, const Budget& budget = {});

/// Re-executes the trial a witness came from. Returns the fresh witness when
/// the violation reproduces.
std::optional<Witness> replay(const OntologicalModel& model, const Witness& w);

// -- table -------------------------------------------------------------------

struct Triple {
  bool reciprocal = false;
  bool deterministic = false;
  bool contextual = false;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TableRowResult {
  TableEntry reference;
  bool implemented = false;
  Triple expected;
  std::optional<Triple> declared;
  std::optional<Triple> measured;
  bool matches = true;
  std::string diff;
};

struct TableReport {
  std::vector<TableRowResult> rows;
  bool pass = true;
  std::uint64_t seed = 0;
  std::uint64_t n_trials = 0;
};

/// Classifies every implemented row. `models` supplies the model for each
/// row that has one (keyed by row number); missing rows are built from the
/// registry. Expected values come from `rows`.
TableReport build_table(const std::vector<TableEntry>& rows, const std::map<int, OntologicalModel>& models,
                        const Budget& budget = {});

}  // namespace ontokit
