// Microbenchmarks for the hot paths: the generalized mean, frontier
// extraction, the area integrals, and end-to-end aggregation and selection.
#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "gfair/aggregation.hpp"
#include "gfair/group_metrics.hpp"
#include "gfair/selection.hpp"
#include "gfair/tradeoff.hpp"

namespace {

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

std::vector<double> random_values(std::size_t n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = 0.05 + 0.95 * u01(rng);
  return v;
}

std::vector<gfair::TradeoffPoint> random_points(std::size_t n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<gfair::TradeoffPoint> pts(n);
  for (auto& p : pts) p = {u01(rng), u01(rng)};
  return pts;
}

// k strictly monotone points, so the frontier keeps all of them.
gfair::Frontier dense_frontier(std::size_t k, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  const auto slot = [&](std::size_t i) {
    return 0.05 + 0.90 * (static_cast<double>(i) + 0.1 + 0.8 * u01(rng)) /
                      static_cast<double>(k);
  };
  std::vector<gfair::TradeoffPoint> pts(k);
  for (std::size_t i = 0; i < k; ++i) pts[i].fairness = slot(i);
  for (std::size_t i = 0; i < k; ++i) pts[i].performance = slot(k - 1 - i);
  return gfair::pareto_frontier(pts);
}

gfair::MetricMatrix random_matrix(std::size_t classes, std::size_t groups,
                                  unsigned long long seed) {
  std::mt19937_64 rng(seed);
  gfair::MetricMatrix m;
  m.mean_mode = gfair::MeanMode::UnweightedGroupMean;
  m.values.assign(classes, std::vector<double>(groups, 0.0));
  m.defined.assign(classes, std::vector<bool>(groups, true));
  m.class_means.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    double sum = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
      m.values[c][g] = 0.05 + 0.95 * u01(rng);
      sum += m.values[c][g];
    }
    m.class_means[c] = sum / static_cast<double>(groups);
  }
  return m;
}

void bm_generalized_mean(benchmark::State& state) {
  const auto values = random_values(1000, 1);
  for (auto _ : state) {
    double m = gfair::generalized_mean(values, 2.5);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(bm_generalized_mean);

void bm_pareto_frontier(benchmark::State& state) {
  const auto pts = random_points(1000, 2);
  for (auto _ : state) {
    auto fr = gfair::pareto_frontier(pts);
    benchmark::DoNotOptimize(fr);
  }
}
BENCHMARK(bm_pareto_frontier);

void bm_auc_step(benchmark::State& state) {
  const auto fr = dense_frontier(200, 3);
  for (auto _ : state) {
    double a = gfair::auc_pfc(fr, gfair::CurveMode::Step);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_auc_step);

void bm_auc_linear(benchmark::State& state) {
  const auto fr = dense_frontier(200, 3);
  for (auto _ : state) {
    double a = gfair::auc_pfc(fr, gfair::CurveMode::Linear);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_auc_linear);

void bm_polar_dto_area(benchmark::State& state) {
  const auto fr = dense_frontier(200, 4);
  const gfair::UtopiaPoint u;
  for (auto _ : state) {
    double a = gfair::polar_dto_area(fr, u, gfair::CurveMode::Step, 10000);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_polar_dto_area);

void bm_aggregate(benchmark::State& state) {
  const auto matrix = random_matrix(10, 6, 5);
  const auto spec = gfair::preset("paper_4_1");
  for (auto _ : state) {
    auto out = gfair::aggregate(matrix, spec);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(bm_aggregate);

void bm_dto(benchmark::State& state) {
  const gfair::TradeoffPoint p{0.8, 0.6};
  const gfair::UtopiaPoint u;
  for (auto _ : state) {
    double d = gfair::dto(p, u);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_dto);

void bm_select(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::vector<gfair::CandidateRun> runs;
  for (int c = 0; c < 40; ++c) {
    for (int s = 0; s < 3; ++s) {
      gfair::CandidateRun r;
      r.method = "m";
      r.config_id = "c" + std::to_string(c);
      r.seed = s;
      r.dev = {u01(rng), u01(rng)};
      r.test = {u01(rng), u01(rng)};
      runs.push_back(r);
    }
  }
  const auto configs = gfair::group_by_config(runs);
  const auto crit = gfair::criterion_from_label("dto");
  for (auto _ : state) {
    auto res = gfair::select(configs, crit);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(bm_select);

}  // namespace

BENCHMARK_MAIN();
