#include "ontokit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ontokit/sphere_quadrature.hpp"

namespace ontokit {

namespace {

constexpr std::uint64_t kChunk = 1u << 15;

struct Moments {
  std::vector<double> sum, sumsq;
  explicit Moments(std::size_t m) : sum(m, 0.0), sumsq(m, 0.0) {}
};

// Each chunk has its own RNG key, so the partition of chunks over threads
// cannot change the result; partial sums are merged in chunk order.
std::vector<Estimate> monte_carlo(const std::function<void(CounterRng&, std::span<double>)>& draw, std::size_t m,
                                  const IntegrationEngine& eng, std::uint64_t stream) {
  const std::uint64_t n = std::max<std::uint64_t>(eng.samples, 2);
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks, Moments(m));
  auto run = [&](std::uint64_t c) {
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t hi = std::min(n, lo + kChunk);
    CounterRng rng(eng.seed, stream, c);
    std::vector<double> buf(m);
    auto& out = partial[c];
    for (std::uint64_t k = lo; k < hi; ++k) {
      draw(rng, buf);
      for (std::size_t j = 0; j < m; ++j) {
        out.sum[j] += buf[j];
        out.sumsq[j] += buf[j] * buf[j];
      }
    }
  };
  unsigned workers = eng.threads ? eng.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += workers) run(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<Estimate> est(m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0, s2 = 0.0;
    for (const auto& p : partial) {
      s += p.sum[j];
      s2 += p.sumsq[j];
    }
    const double mean = s / static_cast<double>(n);
    const double var = std::max(0.0, (s2 - s * mean) / static_cast<double>(n - 1));
    est[j] = {mean, std::sqrt(var / static_cast<double>(n))};
  }
  return est;
}

std::vector<Estimate> point_masses(const EpistemicState::PointMasses& pm, const VectorIntegrand& f, std::size_t m) {
  std::vector<Estimate> out(m);
  std::vector<double> buf(m);
  for (const auto& a : pm.atoms) {
    if (a.weight == 0.0) continue;
    f(a.point, buf);
    for (std::size_t j = 0; j < m; ++j) out[j].value += a.weight * buf[j];
  }
  return out;
}

// All planes where the difference of two lobe mixtures can change form:
// the lobe boundaries and, for each pattern of active lobes, the zero set of
// the linear function that the difference reduces to.
std::vector<Vec3> lobe_difference_cuts(const EpistemicState::CosineLobes& a, const EpistemicState::CosineLobes& b) {
  std::vector<CosineLobe> all;
  for (const auto& l : a.lobes) all.push_back(l);
  for (const auto& l : b.lobes) all.push_back({-l.weight, l.axis});
  std::vector<Vec3> cuts;
  for (const auto& l : all) cuts.push_back(l.axis);
  if (all.size() > 14) return cuts;
  const std::size_t patterns = std::size_t{1} << all.size();
  for (std::size_t mask = 1; mask < patterns; ++mask) {
    Vec3 d = Vec3::Zero();
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (mask >> k & 1u) d += all[k].weight * all[k].axis;
    }
    if (d.norm() > 1e-12) cuts.push_back(d);
  }
  return cuts;
}

}  // namespace

IntegrationEngine IntegrationEngine::closed_form(double tol) {
  IntegrationEngine e;
  e.kind = Kind::ClosedForm;
  e.tolerance = tol;
  return e;
}

IntegrationEngine IntegrationEngine::quadrature(int level, double tol) {
  if (level < 1) throw std::invalid_argument("quadrature level must be >= 1");
  IntegrationEngine e;
  e.kind = Kind::SphereQuadrature;
  e.level = level;
  e.tolerance = tol;
  return e;
}

IntegrationEngine IntegrationEngine::monte_carlo(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  IntegrationEngine e;
  e.kind = Kind::MonteCarlo;
  e.samples = samples;
  e.seed = seed;
  e.tolerance = 0.0;
  return e;
}

IntegrationEngine IntegrationEngine::parse(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto number = [&](std::uint64_t fallback) -> std::uint64_t {
    if (arg.empty()) return fallback;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.front() == '-') throw std::invalid_argument("bad engine argument: " + spec);
    return v;
  };
  if (head == "closed" && arg.empty()) return closed_form();
  if (head == "quad") return quadrature(static_cast<int>(number(17)));
  if (head == "mc") return monte_carlo(number(1'000'000), seed);
  throw std::invalid_argument("unknown engine '" + spec + "' (expected closed, quad[:level] or mc[:samples])");
}

std::string IntegrationEngine::spec() const {
  switch (kind) {
    case Kind::ClosedForm:
      return "closed";
    case Kind::SphereQuadrature:
      return "quad:" + std::to_string(level);
    case Kind::MonteCarlo:
      return "mc:" + std::to_string(samples);
  }
  return "?";
}

bool IntegrationEngine::accepts(double deviation, double std_error) const {
  if (kind == Kind::MonteCarlo) return std::abs(deviation) <= 3.0 * std_error + 1e-12;
  return std::abs(deviation) <= tolerance + std_error;
}

std::vector<Estimate> expectation(const EpistemicState& mu, const VectorIntegrand& f, std::size_t m,
                                  const std::vector<Vec3>& cuts, const IntegrationEngine& engine,
                                  std::uint64_t stream) {
  const auto& rep = mu.representation();
  if (engine.kind == IntegrationEngine::Kind::MonteCarlo) {
    return monte_carlo([&](CounterRng& rng, std::span<double> out) { f(mu.sample(rng), out); }, m, engine, stream);
  }
  if (const auto* pm = std::get_if<EpistemicState::PointMasses>(&rep)) {
    if (pm->aux_from_reference) {
      throw EngineUnsupported("state on " + mu.space().name() + " has a continuous auxiliary part; use mc");
    }
    return point_masses(*pm, f, m);
  }
  if (engine.kind == IntegrationEngine::Kind::ClosedForm) {
    throw EngineUnsupported("no closed form for a continuous state on " + mu.space().name() +
                            "; use quad or mc");
  }
  if (mu.space().kind() != OnticSpace::Kind::Sphere2) {
    throw EngineUnsupported("sphere quadrature needs a sphere ontic space");
  }
  std::vector<Vec3> all_cuts = cuts;
  for (const auto& c : mu.cuts()) all_cuts.push_back(c);
  std::vector<Estimate> out(m);
  std::vector<double> buf(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto r = integrate_sphere(
        [&](const Eigen::Vector3d& n) {
          const OnticPoint p = SpherePoint{n};
          const double d = mu.density(p);
          if (d == 0.0) return 0.0;
          f(p, buf);
          return d * buf[j];
        },
        all_cuts, engine.level);
    out[j] = {r.value, r.error_estimate};
  }
  return out;
}

Estimate expectation(const EpistemicState& mu, const std::function<double(const OnticPoint&)>& f,
                     const std::vector<Vec3>& cuts, const IntegrationEngine& engine, std::uint64_t stream) {
  return expectation(
      mu, [&](const OnticPoint& p, std::span<double> out) { out[0] = f(p); }, 1, cuts, engine, stream)[0];
}

Estimate total_variation(const EpistemicState& a, const EpistemicState& b, const IntegrationEngine& engine,
                         std::uint64_t stream) {
  const auto* pa = std::get_if<EpistemicState::PointMasses>(&a.representation());
  const auto* pb = std::get_if<EpistemicState::PointMasses>(&b.representation());
  if (pa && pb) {
    if (pa->aux_from_reference != pb->aux_from_reference) {
      throw std::invalid_argument("total variation between incompatible atomic states");
    }
    // Same auxiliary law on both sides, so only the atomic parts differ.
    std::vector<WeightedPoint> diff;
    auto add = [&](const WeightedPoint& w, double sign) {
      auto it = std::find_if(diff.begin(), diff.end(),
                             [&](const WeightedPoint& d) { return same_point(d.point, w.point); });
      if (it != diff.end()) {
        it->weight += sign * w.weight;
      } else {
        diff.push_back({sign * w.weight, w.point});
      }
    };
    for (const auto& w : pa->atoms) add(w, 1.0);
    for (const auto& w : pb->atoms) add(w, -1.0);
    double s = 0.0;
    for (const auto& d : diff) s += std::abs(d.weight);
    return {0.5 * s, 0.0};
  }
  if (pa || pb) return {1.0, 0.0};  // atomic vs continuous: mutually singular

  if (engine.kind == IntegrationEngine::Kind::MonteCarlo) {
    // TV = E_M |dA - dB| / (dA + dB) with M the even mixture of A and B.
    const auto est = monte_carlo(
        [&](CounterRng& rng, std::span<double> out) {
          const OnticPoint p = rng.uniform() < 0.5 ? a.sample(rng) : b.sample(rng);
          const double da = a.density(p);
          const double db = b.density(p);
          out[0] = da + db > 0.0 ? std::abs(da - db) / (da + db) : 0.0;
        },
        1, engine, stream);
    return est[0];
  }
  if (engine.kind == IntegrationEngine::Kind::ClosedForm) {
    throw EngineUnsupported("no closed-form total variation for continuous states; use quad or mc");
  }
  if (a.space().kind() != OnticSpace::Kind::Sphere2 || b.space().kind() != OnticSpace::Kind::Sphere2) {
    throw EngineUnsupported("sphere quadrature needs a sphere ontic space");
  }
  std::vector<Vec3> cuts;
  const auto* la = std::get_if<EpistemicState::CosineLobes>(&a.representation());
  const auto* lb = std::get_if<EpistemicState::CosineLobes>(&b.representation());
  if (la && lb) {
    cuts = lobe_difference_cuts(*la, *lb);
  } else {
    cuts = a.cuts();
    for (const auto& c : b.cuts()) cuts.push_back(c);
  }
  const auto r = integrate_sphere(
      [&](const Eigen::Vector3d& n) {
        const OnticPoint p = SpherePoint{n};
        return std::abs(a.density(p) - b.density(p));
      },
      cuts, engine.level);
  return {0.5 * r.value, 0.5 * r.error_estimate};
}

IntegrationEngine default_engine(const OnticSpace& space, std::uint64_t seed) {
  switch (space.kind()) {
    case OnticSpace::Kind::Sphere2:
      return IntegrationEngine::quadrature();
    case OnticSpace::Kind::Composite:
      return IntegrationEngine::monte_carlo(200'000, seed);
    default:
      return IntegrationEngine::closed_form();
  }
}

}  // namespace ontokit
