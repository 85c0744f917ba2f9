#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontokit/framework.hpp"

namespace ontokit {

/// How an expectation over an epistemic state is computed.
struct IntegrationEngine {
  enum class Kind { ClosedForm, SphereQuadrature, MonteCarlo };

  Kind kind = Kind::ClosedForm;
  int level = 17;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Acceptance tolerance for comparisons against exact values. Monte Carlo
  /// comparisons use 3 standard errors instead.
  double tolerance = 1e-12;
  /// Worker threads for Monte Carlo; 0 picks hardware concurrency. Results do
  /// not depend on this value.
  unsigned threads = 0;

  static IntegrationEngine closed_form(double tol = 1e-12);
  static IntegrationEngine quadrature(int level = 17, double tol = 1e-6);
  static IntegrationEngine monte_carlo(std::uint64_t samples, std::uint64_t seed);

  /// "closed", "quad[:level]" or "mc[:samples]".
  static IntegrationEngine parse(const std::string& spec, std::uint64_t seed = 0);
  std::string spec() const;

  /// Whether |estimate - exact| is within the engine's acceptance band.
  bool accepts(double deviation, double std_error) const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

class EngineUnsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// f writes m values for one ontic point.
using VectorIntegrand = std::function<void(const OnticPoint&, std::span<double>)>;

/// E_mu[f] componentwise. `cuts` are discontinuity planes of f on the sphere.
/// `stream` separates independent Monte Carlo estimates under one seed.
std::vector<Estimate> expectation(const EpistemicState& mu, const VectorIntegrand& f, std::size_t m,
                                  const std::vector<Vec3>& cuts, const IntegrationEngine& engine,
                                  std::uint64_t stream = 0);

Estimate expectation(const EpistemicState& mu, const std::function<double(const OnticPoint&)>& f,
                     const std::vector<Vec3>& cuts, const IntegrationEngine& engine, std::uint64_t stream = 0);

/// Total-variation distance between two preparation distributions.
Estimate total_variation(const EpistemicState& a, const EpistemicState& b, const IntegrationEngine& engine,
                         std::uint64_t stream = 0);

/// A sensible default engine for a given ontic space.
IntegrationEngine default_engine(const OnticSpace& space, std::uint64_t seed);

}  // namespace ontokit
