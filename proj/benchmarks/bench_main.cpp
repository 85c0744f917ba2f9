#include <benchmark/benchmark.h>

#include <string>

#include "ontokit/classify.hpp"
#include "ontokit/epi_bound.hpp"
#include "ontokit/ks_valuation.hpp"
#include "ontokit/sphere_quadrature.hpp"
#include "ontokit/zoo.hpp"

using namespace ontokit;

namespace {

std::string data(const std::string& rel) { return std::string(ONTOKIT_DATA_DIR) + "/" + rel; }

void BM_KsBornQuadrature(benchmark::State& state) {
  const OntologicalModel ks = make_ks();
  const auto eng = IntegrationEngine::quadrature(static_cast<int>(state.range(0)));
  CounterRng rng(1, 0);
  const PureState psi = PureState::random(2, rng);
  const PureState phi = PureState::random(2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(predict_probability(ks, psi, {}, phi, {}, eng));
}
BENCHMARK(BM_KsBornQuadrature)->Arg(9)->Arg(17)->Arg(33);

void BM_UnalignedSphereQuadrature(benchmark::State& state) {
  const Eigen::Vector3d a(1, 0, 0), b = Eigen::Vector3d(1, 1, 1).normalized(), c(0, 0.6, 0.8);
  auto f = [&](const Eigen::Vector3d& v) { return (a.dot(v) > 0) * (b.dot(v) > 0) * std::max(0.0, c.dot(v)); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_sphere(f, {a, b, c}, 17));
}
BENCHMARK(BM_UnalignedSphereQuadrature);

void BM_WsMonteCarlo(benchmark::State& state) {
  const OntologicalModel ws = make_ws(3);
  CounterRng rng(2, 0);
  const PureState psi = PureState::random(3, rng);
  const auto basis = random_basis(3, rng);
  const auto eng = IntegrationEngine::monte_carlo(static_cast<std::uint64_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(predict_distribution(ws, psi, {}, basis, eng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WsMonteCarlo)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PeresSearch(benchmark::State& state) {
  const auto g = build_graph(load_vector_set(data("vectors/peres33.vec")));
  for (auto _ : state) benchmark::DoNotOptimize(find_valuation(g));
}
BENCHMARK(BM_PeresSearch);

void BM_OverlapBound(benchmark::State& state) {
  const Fragment f = load_fragment(data("fragments/d3_triads.frag"));
  for (auto _ : state) benchmark::DoNotOptimize(max_overlap_fraction(f));
}
BENCHMARK(BM_OverlapBound)->Unit(benchmark::kMillisecond);

void BM_Simplex(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  LinearProgram lp(n);
  CounterRng rng(3, 0);
  for (int j = 0; j < n; ++j) lp.objective(j) = rng.uniform();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd row(n);
    for (int j = 0; j < n; ++j) row(j) = rng.uniform();
    lp.add_le(row, 1.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(simplex_solve(lp));
}
BENCHMARK(BM_Simplex)->Arg(20)->Arg(60);

}  // namespace
BENCHMARK_MAIN();
