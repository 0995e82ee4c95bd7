#include <benchmark/benchmark.h>

#include "nashnet/dynamics.hpp"
#include "nashnet/games.hpp"
#include "nashnet/graph.hpp"
#include "nashnet/rates.hpp"
#include "nashnet/rng.hpp"

namespace {

using namespace nashnet;

struct Setup {
  Graph graph;
  SpectralData spectral;
  QuadraticGame game;
  GameSpec spec;
  EstimateState state;

  explicit Setup(std::size_t n)
      : graph(Graph::validate(random_strongly_connected_weights(n, 1, 0.5))),
        spectral(pf_eigenvector(graph)),
        game(random_quadratic_game(std::vector<std::size_t>(n, 2), 1,
                                   RandomQuadraticOptions{1.0, 0.5, 1.0})),
        spec(game.spec()),
        state(initial_state(spec)) {
    Rng rng(2);
    for (Eigen::Index i = 0; i < state.stack.size(); ++i) state.stack(i) = rng.uniform(-1, 1);
  }
};

void BM_Alg1Step(benchmark::State& st) {
  const Setup s(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(alg1_step(s.state, s.graph, s.spec, s.spectral.q, 1e-3));
  }
}
BENCHMARK(BM_Alg1Step)->Arg(5)->Arg(20)->Arg(50);

void BM_Alg2Step(benchmark::State& st) {
  const Setup s(static_cast<std::size_t>(st.range(0)));
  const EigenvectorEstimates eig = EigenvectorEstimates::canonical(s.graph.size());
  for (auto _ : st) {
    benchmark::DoNotOptimize(alg2_step(s.state, eig, s.graph, s.spec, 1e-3));
  }
}
BENCHMARK(BM_Alg2Step)->Arg(5)->Arg(20)->Arg(50);

void BM_CompactIteration(benchmark::State& st) {
  const Setup s(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        compact_iteration(s.state.stack, s.graph, s.spec, s.spectral.q, 1e-3));
  }
}
BENCHMARK(BM_CompactIteration)->Arg(5)->Arg(20)->Arg(50);

void BM_PfEigenvector(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Graph g = Graph::validate(random_strongly_connected_weights(n, 3, 0.3));
  for (auto _ : st) benchmark::DoNotOptimize(pf_eigenvector(g));
}
BENCHMARK(BM_PfEigenvector)->Arg(10)->Arg(50)->Arg(200);

void BM_MaxStepSize(benchmark::State& st) {
  const Graph g = Graph::validate(random_strongly_connected_weights(10, 4, 0.8));
  const SpectralData sp = pf_eigenvector(g);
  const GameConstants c =
      game_constants(random_quadratic_game(std::vector<std::size_t>(10, 2), 4));
  for (auto _ : st) benchmark::DoNotOptimize(max_step_size(c, sp.q, sp.sigma_bar));
}
BENCHMARK(BM_MaxStepSize);

}  // namespace

BENCHMARK_MAIN();
