#include <benchmark/benchmark.h>

#include "rfeh/analytic_stats.hpp"
#include "rfeh/datasets.hpp"
#include "rfeh/density_evolution.hpp"
#include "rfeh/fitting.hpp"
#include "rfeh/montecarlo.hpp"
#include "rfeh/special_functions.hpp"

namespace {

using namespace rfeh;

const PiecewiseLinearHarvester& rectenna() {
  static const auto h = build_piecewise(
      GroundTruthHarvester(fit_efficiency(bundled_dataset("rectenna-A").curve(), 10)), 585,
      SupportSpacing::kUniformDb);
  return h;
}

void BM_RegularizedGammaQ(benchmark::State& state) {
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(regularized_gamma_q(5.0, z));
    z = z < 40.0 ? z * 1.01 : 0.1;
  }
}
BENCHMARK(BM_RegularizedGammaQ);

void BM_QInverse(benchmark::State& state) {
  double p = 1e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_inverse(p));
    p = p < 0.49 ? p * 1.1 : 1e-9;
  }
}
BENCHMARK(BM_QInverse);

void BM_ExpectedPowerPiecewise(benchmark::State& state) {
  const auto& h = rectenna();
  LinkBudget link;
  const FadingChannel ch{5.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(expected_power_piecewise(link, ch, h));
}
BENCHMARK(BM_ExpectedPowerPiecewise);

void BM_ExpectedPowerQuadrature(benchmark::State& state) {
  const auto& h = rectenna();
  LinkBudget link;
  const FadingChannel ch{5.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(expected_power_numeric(link, ch, h));
}
BENCHMARK(BM_ExpectedPowerQuadrature)->Unit(benchmark::kMillisecond);

void BM_ConvolveN(benchmark::State& state) {
  const auto& h = rectenna();
  LinkBudget link;
  const FadingChannel ch{5.0, 1.0};
  const HarvestedPowerDistribution dist(h, link, ch);
  const auto mom = harvested_power_moments(link, ch, h);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto single = discretize(dist, default_grid(mom.mean, mom.variance, n, 1u << 16));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_n(single, n).values.data());
}
BENCHMARK(BM_ConvolveN)->Arg(2)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FirstPassage(benchmark::State& state) {
  const auto& h = rectenna();
  LinkBudget link;
  link.distance_m = 8.0;
  const FadingChannel ch{5.0, 1.0};
  const HarvestedPowerDistribution dist(h, link, ch);
  const ChargingSpec spec;
  const double theta = spec.threshold_mw();
  const auto single =
      discretize_cdf([&](double x) { return dist.cdf(x); }, charging_grid(theta), true);
  for (auto _ : state) benchmark::DoNotOptimize(first_passage_pmf_until(single, theta).residual);
}
BENCHMARK(BM_FirstPassage)->Unit(benchmark::kMillisecond);

void BM_SimulateEnergy(benchmark::State& state) {
  SimulationPlan plan;
  plan.trials = 100000;
  plan.model = rectenna();
  plan.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_energy(plan).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plan.trials));
}
BENCHMARK(BM_SimulateEnergy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
