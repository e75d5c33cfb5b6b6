#include <benchmark/benchmark.h>

#include "abdr/bayes_boot.hpp"
#include "abdr/estimators.hpp"
#include "abdr/matching.hpp"
#include "abdr/propensity.hpp"
#include "abdr/sim.hpp"

using namespace abdr;

namespace {

Dataset make_data(int n) {
  DgpParams params;
  params.n = n;
  RngStream rng(7);
  return generate_dgp(params, rng);
}

void BM_WeightedLinearFit(benchmark::State& state) {
  Dataset ds = make_data(static_cast<int>(state.range(0)));
  DesignMatrix design = expand_basis(ds, 1);
  Eigen::VectorXd y = ds.outcomes();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(design.n());
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_weighted_linear(design, y, w));
}
BENCHMARK(BM_WeightedLinearFit)->Arg(1000)->Arg(10000);

void BM_LogisticFit(benchmark::State& state) {
  Dataset ds = make_data(static_cast<int>(state.range(0)));
  DesignMatrix design =
      DesignBuilder::from_dataset(ds, 1, false, true).build(ds);
  Eigen::VectorXd d = ds.treatments();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(design.n());
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_weighted_logistic(design, d, w));
}
BENCHMARK(BM_LogisticFit)->Arg(1000)->Arg(10000);

void BM_DirichletWeights(benchmark::State& state) {
  RngStream rng(1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(draw_dirichlet_weights(n, rng));
}
BENCHMARK(BM_DirichletWeights)->Arg(1000)->Arg(10000);

void BM_PosteriorSample(benchmark::State& state) {
  Dataset ds = make_data(1000);
  DesignMatrix design = expand_basis(ds, 1);
  Eigen::VectorXd y = ds.outcomes();
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        posterior_sample(design, y, std::nullopt, L, RngStream(3)));
}
BENCHMARK(BM_PosteriorSample)->Arg(50)->Arg(200);

void BM_Matching(benchmark::State& state) {
  DgpParams params;
  params.n = static_cast<int>(state.range(0));
  params.alpha0 = -1.0;  // control-rich so 1:1 matching is feasible
  RngStream rng(5);
  Dataset ds = generate_dgp(params, rng);
  PropensityFit ps = estimate_propensity(ds);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        nearest_neighbor_match(ps, ds, 1, false, std::nullopt));
}
BENCHMARK(BM_Matching)->Arg(1000)->Arg(10000);

void BM_FullEstimate(benchmark::State& state) {
  Dataset ds = make_data(1000);
  EstimatorConfig config;
  config.bootstrap_reps = static_cast<int>(state.range(0));
  config.resample_size = 200;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_dr(ds, config));
}
BENCHMARK(BM_FullEstimate)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
