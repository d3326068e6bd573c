#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "avstress/crosswalk.hpp"
#include "avstress/gaussian_policy.hpp"
#include "avstress/mcts.hpp"
#include "avstress/rollout.hpp"
#include "avstress/trpo.hpp"

namespace {

using namespace avstress;

void BM_SimStep(benchmark::State& state) {
  CrosswalkSim sim(scenario_preset(1));
  const EnvAction a = EnvAction::zeros(1);
  sim.initialize();
  for (auto _ : state) {
    if (sim.is_terminal()) sim.initialize();
    benchmark::DoNotOptimize(sim.step(a));
  }
}
BENCHMARK(BM_SimStep);

void BM_FullEpisode(benchmark::State& state) {
  const ScenarioConfig cfg = scenario_preset(2);
  CrosswalkSim sim(cfg);
  RewardParams rp;
  std::vector<EnvAction> actions(static_cast<std::size_t>(cfg.horizon), EnvAction::zeros(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(replay(sim, actions, rp));
  }
}
BENCHMARK(BM_FullEpisode);

void BM_SeedToAction(benchmark::State& state) {
  const Eigen::VectorXd var = scenario_preset(3).action_variance();
  Seed seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(seed_to_action(seed++, var));
  }
}
BENCHMARK(BM_SeedToAction);

void BM_PolicyForward(benchmark::State& state) {
  GaussianPolicy pol(4, 6, {32, 32}, 1);
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd states = Eigen::MatrixXd::Random(4, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pol.mean_batch(states));
  }
}
BENCHMARK(BM_PolicyForward)->Arg(1)->Arg(64)->Arg(1024);

void BM_FisherVectorProduct(benchmark::State& state) {
  GaussianPolicy pol(4, 6, {32, 32}, 1);
  const int n = 1024;
  Eigen::MatrixXd states = Eigen::MatrixXd::Random(4, n);
  Eigen::VectorXd v = Eigen::VectorXd::Random(pol.parameter_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher_vector_product(pol, states, v, 0.1));
  }
}
BENCHMARK(BM_FisherVectorProduct);

}  // namespace

BENCHMARK_MAIN();
