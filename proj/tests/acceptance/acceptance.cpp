// The acceptance gate. Each numbered criterion is verified against an
// independent oracle (closed forms, brute-force filters, grid counts, or a
// frozen hand-enumerated table) and reported as one [PASS]/[FAIL] line.
// Exit status is 0 only when every checked criterion passes.
//
// Usage: acceptance <data-dir>   (the directory holding the shipped fixtures)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gfair/aggregation.hpp"
#include "gfair/errors.hpp"
#include "gfair/fixture.hpp"
#include "gfair/group_metrics.hpp"
#include "gfair/selection.hpp"
#include "gfair/tradeoff.hpp"
#include "json.hpp"

using namespace gfair;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 53-bit mantissa draw in [0,1); identical sequences on every platform.
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Check {
  bool pass = true;
  std::string detail;

  void fail(std::string msg) {
    if (pass) {
      pass = false;
      detail = std::move(msg);
    }
  }
  void note(std::string msg) {
    if (pass) detail = std::move(msg);
  }
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ===== 1: golden distance table =============================================

// 28 (performance%, fairness%, distance%) operating points; the distance
// column must equal the Euclidean gap to (100%, 100%) within 5e-5.
Check golden_distances() {
  static constexpr double kRows[28][3] = {
      {81.354350, 62.442580, 41.931134}, {64.601630, 83.683840, 38.977707},
      {68.089476, 79.471282, 37.943508}, {69.734659, 78.820603, 36.939920},
      {81.354350, 62.442580, 41.931134}, {81.470683, 59.474805, 44.560375},
      {81.436214, 59.287611, 44.744975}, {81.256687, 58.635181, 45.413214},
      {53.753905, 74.979811, 52.580521}, {71.531363, 67.315544, 43.344399},
      {73.435065, 68.755527, 41.011131}, {70.357258, 73.948014, 39.463883},
      {53.753905, 74.979811, 52.580521}, {68.815482, 72.103062, 41.841526},
      {69.660694, 73.240677, 40.454108}, {70.006104, 75.032929, 39.025484},
      {29.812215, 99.999689, 70.187785}, {51.601020, 90.219145, 49.377388},
      {61.776597, 88.646096, 39.874048}, {37.946932, 99.038855, 62.060511},
      {81.354350, 62.442580, 41.931134}, {79.061434, 64.488537, 41.224841},
      {80.443072, 64.657701, 40.392468}, {79.908082, 61.115353, 43.768721},
      {81.354350, 62.442580, 41.931134}, {79.061434, 64.488537, 41.224841},
      {74.207748, 66.965168, 41.911101}, {74.859790, 65.366052, 42.796501},
  };

  Check c;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& row : kRows) {
    const TradeoffPoint q{row[0] / 100.0, row[1] / 100.0};
    const double err = std::fabs(dto(q, UtopiaPoint{}) - row[2] / 100.0);
    worst = std::max(worst, err);
    if (err > 5e-5)
      c.fail(fmt("point (%.6f, %.6f): |dto - %.6f| = %.3g > 5e-5", q.performance,
                 q.fairness, row[2] / 100.0, err));
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  if (ms > 1000.0) c.fail(fmt("took %.0f ms (budget 1000 ms)", ms));
  c.note(fmt("28 operating points, max |err| = %.3g, %.2f ms", worst, ms));
  return c;
}

// ===== 2: generalized-mean monotonicity =====================================

Check mean_monotonicity() {
  Check c;
  std::mt19937_64 rng(0x5eed0002);
  const double ladder[] = {-kInf, -5.0, -1.0, 1.0, 2.0, 5.0, kInf};

  const auto draw_exponent = [&]() {
    if (rng() & 1) return ladder[rng() % 7];
    const double mag = 0.25 + 5.75 * u01(rng);
    return (rng() & 1) ? mag : -mag;
  };

  for (int i = 0; i < 1000 && c.pass; ++i) {
    const std::size_t n = 2 + rng() % 9;
    std::vector<double> values(n);
    double spread = 0.0;
    do {
      for (auto& v : values) v = 1.0 - u01(rng);  // (0, 1]
      const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
      spread = *mx - *mn;
    } while (spread < 1e-3);

    // Exponent pairs are kept apart so the strict inequality is testable in
    // floating point: distinct, and >= 0.25 apart when both are finite.
    double a = 0.0, b = 0.0;
    do {
      a = draw_exponent();
      b = draw_exponent();
    } while (a == b || (std::isfinite(a) && std::isfinite(b) && std::fabs(a - b) < 0.25));
    const double hi = std::max(a, b), lo = std::min(a, b);

    const double m_hi = generalized_mean(values, hi);
    const double m_lo = generalized_mean(values, lo);
    if (!(m_hi > m_lo))
      c.fail(fmt("case %d: M_%.3g = %.17g is not > M_%.3g = %.17g (n=%zu, spread=%.3g)",
                 i, hi, m_hi, lo, m_lo, n, spread));
  }

  for (int i = 0; i < 200 && c.pass; ++i) {
    const std::size_t n = 2 + rng() % 9;
    const double v = 1.0 - u01(rng);
    const std::vector<double> values(n, v);
    const double p = draw_exponent();
    if (generalized_mean(values, p) != v)
      c.fail(fmt("constant case %d: M_%.3g(%.17g x %zu) != the value exactly", i, p, v, n));
  }

  c.note("1000 ordered exponent pairs strictly monotone, 200 constant vectors exact");
  return c;
}

// ===== 3: preset equivalence ================================================

MetricMatrix random_matrix(std::mt19937_64& rng) {
  const std::size_t C = 2 + rng() % 9;  // 2..10
  const std::size_t G = 2 + rng() % 5;  // 2..6
  MetricMatrix m;
  m.kind = BaseMetricKind::TPR;
  m.mean_mode = MeanMode::UnweightedGroupMean;
  m.values.assign(C, std::vector<double>(G, 0.0));
  m.defined.assign(C, std::vector<bool>(G, false));
  m.class_means.assign(C, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    std::size_t defined = 0;
    for (std::size_t g = 0; g < G; ++g) {
      if (u01(rng) < 0.9) {
        m.values[c][g] = 0.05 + 0.95 * u01(rng);
        m.defined[c][g] = true;
        ++defined;
      }
    }
    while (defined < 2) {  // every row supports every preset, variance included
      const std::size_t g = rng() % G;
      if (m.defined[c][g]) continue;
      m.values[c][g] = 0.05 + 0.95 * u01(rng);
      m.defined[c][g] = true;
      ++defined;
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t g = 0; g < G; ++g)
      if (m.defined[c][g]) {
        sum += m.values[c][g];
        ++count;
      }
    m.class_means[c] = sum / static_cast<double>(count);
  }
  return m;
}

// Direct transliteration of each preset's printed formula, evaluated with
// plain loops; no shared code with the library pipeline.
AggregationOutcome preset_formula(const std::string& name, const MetricMatrix& m,
                                  double gamma) {
  const std::size_t C = m.num_classes(), G = m.num_groups();
  const auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };

  AggregationOutcome out;
  out.betas.resize(C);
  for (std::size_t c = 0; c < C; ++c) {
    const double mu = m.class_means[c];
    double gap_sum = 0.0, sq_sum = 0.0, max_gap = -kInf;
    double min_v = kInf, max_v = -kInf, min_ratio = kInf;
    double gap_hits = 0.0, ratio_hits = 0.0;
    double n = 0.0;
    for (std::size_t g = 0; g < G; ++g) {
      if (!m.defined[c][g]) continue;
      const double v = m.values[c][g];
      n += 1.0;
      gap_sum += std::fabs(v - mu);
      sq_sum += std::fabs(v - mu) * std::fabs(v - mu);
      max_gap = std::max(max_gap, std::fabs(v - mu));
      min_v = std::min(min_v, v);
      max_v = std::max(max_v, v);
      min_ratio = std::min(min_ratio, v / mu);
      if (std::fabs(v - mu) <= gamma) gap_hits += 1.0;
      if (std::fabs(v / mu - 1.0) <= gamma) ratio_hits += 1.0;
    }
    double beta = 0.0;
    if (name == "mean_gap" || name == "mean" || name == "binary" ||
        name == "quadratic_mean")
      beta = gap_sum / n;
    else if (name == "variance")
      beta = sq_sum / (n - 1.0);
    else if (name == "max_gap")
      beta = max_gap;
    else if (name == "min_score")
      beta = min_v;
    else if (name == "min_ratio")
      beta = min_ratio;
    else if (name == "max_difference")
      beta = max_v - min_v;
    else if (name == "max_ratio")
      beta = max_v / min_v;
    else if (name == "difference_threshold")
      beta = gap_hits / n;
    else if (name == "ratio_threshold")
      beta = ratio_hits / n;
    else
      throw InternalError("preset_formula: unknown preset " + name);
    out.betas[c] = beta;
  }

  if (name == "binary") {
    out.delta = out.betas[1];
  } else if (name == "quadratic_mean") {
    double s = 0.0;
    for (double b : out.betas) s += b * b;
    out.delta = std::sqrt(s / static_cast<double>(C));
  } else {
    double s = 0.0;
    for (double b : out.betas) s += b;
    out.delta = s / static_cast<double>(C);
  }

  if (name == "min_score" || name == "min_ratio" || name == "difference_threshold" ||
      name == "ratio_threshold")
    out.fairness = clamp01(out.delta);
  else if (name == "max_ratio")
    out.fairness = clamp01(out.delta <= 1.0 ? out.delta : 1.0 / out.delta);
  else
    out.fairness = clamp01(1.0 - out.delta);
  return out;
}

Check preset_equivalence() {
  Check c;
  std::mt19937_64 rng(0x5eed0003);
  const char* names[] = {"mean_gap",       "variance",   "max_gap",
                         "min_score",      "min_ratio",  "max_difference",
                         "max_ratio",      "difference_threshold",
                         "ratio_threshold", "binary",    "quadratic_mean",
                         "mean"};
  double worst = 0.0;
  for (const char* name : names) {
    const bool takes_gamma =
        std::string(name) == "difference_threshold" || std::string(name) == "ratio_threshold";
    for (int i = 0; i < 200 && c.pass; ++i) {
      const MetricMatrix m = random_matrix(rng);
      const double gamma = takes_gamma ? 0.01 + 0.49 * u01(rng) : 0.0;
      const AggregationSpec spec =
          takes_gamma ? preset(name, gamma) : preset(name);
      const AggregationOutcome got = aggregate(m, spec);
      const AggregationOutcome want = preset_formula(name, m, gamma);

      double err = std::fabs(got.delta - want.delta);
      err = std::max(err, std::fabs(got.fairness - want.fairness));
      for (std::size_t k = 0; k < want.betas.size(); ++k)
        err = std::max(err, std::fabs(got.betas[k] - want.betas[k]));
      worst = std::max(worst, err);
      if (err > 1e-12)
        c.fail(fmt("preset %s, matrix %d (%zux%zu): max component error %.3g > 1e-12",
                   name, i, m.num_classes(), m.num_groups(), err));
    }
  }
  c.note(fmt("12 presets x 200 random matrices, max component error %.3g", worst));
  return c;
}

// ===== 4: Pareto frontier vs brute force ====================================

Check pareto_oracle() {
  Check c;
  std::mt19937_64 rng(0x5eed0004);
  const auto start = std::chrono::steady_clock::now();

  for (int rep = 0; rep < 100 && c.pass; ++rep) {
    std::size_t n;
    bool snap;
    if (rep < 50) {
      n = 1 + rng() % 20;
      snap = true;
    } else if (rep < 75) {
      n = 50 + rng() % 251;
      snap = true;  // coarse grid: heavy ties and duplicates
    } else {
      n = 500 + rng() % 501;
      snap = false;
    }

    std::vector<TradeoffPoint> pts(n);
    for (auto& p : pts) {
      double x = u01(rng), y = u01(rng);
      if (snap) {
        x = std::round(x * 32.0) / 32.0;
        y = std::round(y * 32.0) / 32.0;
      }
      p = {x, y};
    }

    const Frontier got = pareto_frontier(pts);

    // O(n^2) filter over the distinct points.
    std::set<std::pair<double, double>> distinct;
    for (const auto& p : pts) distinct.insert({p.performance, p.fairness});
    std::vector<TradeoffPoint> want;
    for (const auto& p : distinct) {
      bool dominated = false;
      for (const auto& q : distinct) {
        if (q == p) continue;
        if (q.first >= p.first && q.second >= p.second) {
          dominated = true;
          break;
        }
      }
      if (!dominated) want.push_back({p.first, p.second});
    }
    std::sort(want.begin(), want.end(),
              [](const auto& a, const auto& b) { return a.performance > b.performance; });

    if (got.points != want)
      c.fail(fmt("set %d (n=%zu%s): frontier has %zu points, brute force %zu", rep, n,
                 snap ? ", grid-snapped" : "", got.points.size(), want.size()));
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > 5.0) c.fail(fmt("took %.2f s (budget 5 s)", secs));
  c.note(fmt("100 point sets up to n=1000 match the brute-force filter, %.2f s", secs));
  return c;
}

// ===== 5: areas vs grid membership counts ===================================

// A frontier with k points, strictly monotone on both axes by construction.
Frontier random_frontier(std::mt19937_64& rng, std::size_t max_points) {
  const std::size_t k = 1 + rng() % max_points;
  Frontier fr;
  fr.points.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double fi = static_cast<double>(i);
    const double kk = static_cast<double>(k);
    // Slot i owns [i/k, (i+1)/k) of [0.05, 0.95]; points keep a 0.2/k gap.
    fr.points[i].fairness = 0.05 + 0.90 * (fi + 0.1 + 0.8 * u01(rng)) / kk;
    fr.points[k - 1 - i].performance = 0.05 + 0.90 * (fi + 0.1 + 0.8 * u01(rng)) / kk;
  }
  return fr;
}

// Height of the attainment boundary over fairness = x.
double boundary_height(const Frontier& fr, double x, CurveMode mode) {
  const auto& pts = fr.points;
  if (x <= pts.front().fairness) return pts.front().performance;
  if (x > pts.back().fairness) return 0.0;
  if (mode == CurveMode::Step) {
    for (const auto& p : pts)
      if (p.fairness >= x) return p.performance;
    return 0.0;
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (x <= pts[i].fairness) {
      const double t = (x - pts[i - 1].fairness) / (pts[i].fairness - pts[i - 1].fairness);
      return pts[i - 1].performance + t * (pts[i].performance - pts[i - 1].performance);
    }
  }
  return 0.0;
}

// #{ j in [0,N) : (j+0.5)/N <= t } resp. < t — the naive column count,
// found by monotone bisection over the exact same predicate the full
// 2000x2000 loop would evaluate.
long long count_le(double t, long long N) {
  long long lo = -1, hi = N;
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if ((static_cast<double>(mid) + 0.5) / static_cast<double>(N) <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo + 1;
}
long long count_lt(double t, long long N) {
  long long lo = -1, hi = N;
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if ((static_cast<double>(mid) + 0.5) / static_cast<double>(N) < t)
      lo = mid;
    else
      hi = mid;
  }
  return lo + 1;
}

Check area_grid_oracle() {
  Check c;
  std::mt19937_64 rng(0x5eed0005);
  constexpr long long N = 2000;
  double worst = 0.0;

  const auto check_one = [&](const char* what, double got, double grid_cells, int rep) {
    const double estimate = grid_cells / (static_cast<double>(N) * static_cast<double>(N));
    const double err = std::fabs(got - estimate);
    worst = std::max(worst, err);
    if (err > 1e-3)
      c.fail(fmt("frontier %d, %s: |%.6f - grid %.6f| = %.3g > 1e-3", rep, what, got,
                 estimate, err));
  };

  for (int rep = 0; rep < 50 && c.pass; ++rep) {
    const Frontier fr = random_frontier(rng, 12);
    const double t_perf = u01(rng);
    const double t_fair = u01(rng);
    const double d_max = 0.1 + 1.1 * u01(rng);

    for (const CurveMode mode : {CurveMode::Step, CurveMode::Linear}) {
      const char* tag = mode == CurveMode::Step ? "step" : "linear";
      double cells_full = 0.0, cells_minp = 0.0, cells_minf = 0.0, cells_dto = 0.0;
      for (long long i = 0; i < N; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
        const double yb = boundary_height(fr, x, mode);
        const long long below = count_le(yb, N);
        cells_full += static_cast<double>(below);
        cells_minp += static_cast<double>(std::max(0LL, below - count_lt(t_perf, N)));
        if (x >= t_fair) cells_minf += static_cast<double>(below);
        const double dx = 1.0 - x;
        if (dx <= d_max) {
          const double y_lo = 1.0 - std::sqrt(d_max * d_max - dx * dx);
          cells_dto += static_cast<double>(std::max(0LL, below - count_lt(y_lo, N)));
        }
      }

      check_one(fmt("auc %s", tag).c_str(), auc_pfc(fr, mode), cells_full, rep);
      check_one(fmt("min-performance %s", tag).c_str(),
                partial_auc_pfc(fr, MinPerformance{t_perf}, mode), cells_minp, rep);
      check_one(fmt("min-fairness %s", tag).c_str(),
                partial_auc_pfc(fr, MinFairness{t_fair}, mode), cells_minf, rep);
      check_one(fmt("max-dto %s", tag).c_str(),
                partial_auc_pfc(fr, MaxDTO{d_max, UtopiaPoint{}}, mode), cells_dto, rep);
    }
  }
  c.note(fmt("50 frontiers x 2 modes x {auc, 3 partials} vs 2000^2 grid counts, "
             "max |err| = %.3g",
             worst));
  return c;
}

// ===== 6: polar complement ==================================================

Check polar_complement() {
  Check c;
  std::mt19937_64 rng(0x5eed0006);
  double worst = 0.0;
  for (int rep = 0; rep < 50 && c.pass; ++rep) {
    const Frontier fr = random_frontier(rng, 12);
    for (const CurveMode mode : {CurveMode::Step, CurveMode::Linear}) {
      const double total =
          auc_pfc(fr, mode) + polar_dto_area(fr, UtopiaPoint{}, mode, 10000);
      const double err = std::fabs(total - 1.0);
      worst = std::max(worst, err);
      if (err > 1e-3)
        c.fail(fmt("frontier %d (%s): area + polar complement = %.6f, |err| = %.3g",
                   rep, mode == CurveMode::Step ? "step" : "linear", total, err));
    }
  }
  c.note(fmt("50 frontiers, both modes: area + polar complement = 1, max |err| = %.3g",
             worst));
  return c;
}

// ===== 7: utopia-shift identity =============================================

Check utopia_shift_identity() {
  Check c;
  std::mt19937_64 rng(0x5eed0007);
  double worst = 0.0;

  for (int rep = 0; rep < 1000 && c.pass; ++rep) {
    const TradeoffPoint q{u01(rng), u01(rng)};
    UtopiaPoint u;
    u.performance = q.performance + (1.0 - q.performance) * u01(rng);
    u.fairness = q.fairness + (1.0 - q.fairness) * u01(rng);
    const double b = 0.001 + 0.999 * u01(rng);

    const auto [before, after] = utopia_shift_check(q, u, b);
    const double lhs = after * after - before * before;
    const double rhs = b * b + 2.0 * b * (u.performance - q.performance);
    const double err = std::fabs(lhs - rhs);
    worst = std::max(worst, err);
    if (err > 1e-12)
      c.fail(fmt("triple %d: |(d'^2 - d^2) - (b^2 + 2b dp)| = %.3g > 1e-12", rep, err));
  }

  // Pairs with equal distance to (1,1): after the shift, the point with the
  // worse performance must be strictly farther.
  for (int rep = 0; rep < 200 && c.pass; ++rep) {
    const double r = 0.05 + 0.85 * u01(rng);
    const double b = 0.001 + 0.999 * u01(rng);
    double th1 = 0.0, th2 = 0.0;
    do {
      const double lo = 0.05, hi = std::numbers::pi / 2.0 - 0.05;
      th1 = lo + (hi - lo) * u01(rng);
      th2 = lo + (hi - lo) * u01(rng);
    } while (std::fabs(std::cos(th1) - std::cos(th2)) < 1e-3);
    if (std::cos(th1) < std::cos(th2)) std::swap(th1, th2);  // th1 = lower performance

    const TradeoffPoint low{1.0 - r * std::cos(th1), 1.0 - r * std::sin(th1)};
    const TradeoffPoint high{1.0 - r * std::cos(th2), 1.0 - r * std::sin(th2)};
    const double d_low = utopia_shift_check(low, UtopiaPoint{}, b).second;
    const double d_high = utopia_shift_check(high, UtopiaPoint{}, b).second;
    if (!(d_low > d_high))
      c.fail(fmt("pair %d: lower-performance point not strictly farther "
                 "(%.17g vs %.17g, r=%.3f b=%.3f)",
                 rep, d_low, d_high, r, b));
  }

  c.note(fmt("1000 identity triples (max |err| = %.3g), 200 equal-distance pairs ordered",
             worst));
  return c;
}

// ===== 8: selection-divergence fixture ======================================

struct NaiveCell {
  std::string config;
  double test_dto = 0.0;
};

Check divergence_fixture(const std::string& data_dir) {
  Check c;

  std::ifstream manifest_in(data_dir + "/divergence_manifest.json");
  if (!manifest_in) {
    c.fail("cannot open " + data_dir + "/divergence_manifest.json");
    return c;
  }
  const auto runs = parse_manifest(manifest_in);

  std::ifstream expected_in(data_dir + "/divergence_expected.json");
  if (!expected_in) {
    c.fail("cannot open " + data_dir + "/divergence_expected.json");
    return c;
  }
  const json expected = json::parse(expected_in);

  std::vector<SelectionCriterion> criteria;
  std::vector<std::string> labels;
  for (const auto& l : expected.at("criteria")) {
    labels.push_back(l.get<std::string>());
    criteria.push_back(criterion_from_label(labels.back()));
  }

  const auto table = compare_methods(runs, criteria, CurveMode::Step);

  // Independent re-derivation with plain loops (no library selection code):
  // seed-average each (method, config), anchor on vanilla's best dev
  // performance, then argmax per criterion with the documented tie-breaks.
  struct Avg {
    double dev_p = 0, dev_f = 0, test_p = 0, test_f = 0;
    int n = 0;
  };
  std::map<std::string, std::map<std::string, Avg>> by_method;
  for (const auto& r : runs) {
    Avg& a = by_method[r.method][r.config_id];
    a.dev_p += r.dev.performance;
    a.dev_f += r.dev.fairness;
    a.test_p += r.test.performance;
    a.test_f += r.test.fairness;
    a.n += 1;
  }
  for (auto& [m, configs] : by_method)
    for (auto& [id, a] : configs) {
      a.dev_p /= a.n;
      a.dev_f /= a.n;
      a.test_p /= a.n;
      a.test_f /= a.n;
    }

  double base_p = -kInf, base_f = 0.0;
  for (const auto& [id, a] : by_method.at("vanilla"))
    if (a.dev_p > base_p) {
      base_p = a.dev_p;
      base_f = a.dev_f;
    }

  const auto naive_select = [&](const std::map<std::string, Avg>& configs,
                                const std::string& label) -> NaiveCell {
    const double pp = label.size() > 5 ? std::strtod(label.substr(4).c_str(), nullptr) / 100.0
                                       : 0.0;
    const Avg* best = nullptr;
    const std::string* best_id = nullptr;
    double best_obj = 0.0;
    for (const auto& [id, a] : configs) {
      if (label.rfind("p@f+", 0) == 0 && !(a.dev_f >= base_f + pp)) continue;
      if (label.rfind("f@p-", 0) == 0 && !(a.dev_p >= base_p - pp)) continue;
      double obj;
      if (label == "dto")
        obj = std::sqrt((1.0 - a.dev_p) * (1.0 - a.dev_p) +
                        (1.0 - a.dev_f) * (1.0 - a.dev_f));
      else if (label == "p" || label.rfind("p@f+", 0) == 0)
        obj = -a.dev_p;
      else
        obj = -a.dev_f;
      if (!best || obj < best_obj ||
          (obj == best_obj &&
           (a.dev_f > best->dev_f || (a.dev_f == best->dev_f && id < *best_id)))) {
        best = &a;
        best_id = &id;
        best_obj = obj;
      }
    }
    NaiveCell cell;
    cell.config = *best_id;
    cell.test_dto = std::sqrt((1.0 - best->test_p) * (1.0 - best->test_p) +
                              (1.0 - best->test_f) * (1.0 - best->test_f));
    return cell;
  };

  // (a) library vs naive oracle vs frozen table, cell by cell.
  for (const auto& m : table.methods) {
    for (std::size_t ci = 0; ci < labels.size() && c.pass; ++ci) {
      if (!m.cells[ci].result) {
        c.fail("infeasible cell " + m.method + " / " + labels[ci]);
        break;
      }
      const auto& got = *m.cells[ci].result;
      const NaiveCell naive = naive_select(by_method.at(m.method), labels[ci]);
      if (got.chosen_config != naive.config) {
        c.fail("cell " + m.method + " / " + labels[ci] + ": library chose " +
               got.chosen_config + ", naive oracle " + naive.config);
        break;
      }
      const auto& frozen = expected.at("selections").at(labels[ci]).at(m.method);
      if (got.chosen_config != frozen.at("config").get<std::string>()) {
        c.fail("cell " + m.method + " / " + labels[ci] + ": library chose " +
               got.chosen_config + ", frozen table " +
               frozen.at("config").get<std::string>());
        break;
      }
      const double want_dto = frozen.at("test_dto").get<double>();
      if (std::fabs(got.test_dto - want_dto) > 1e-12 ||
          std::fabs(naive.test_dto - want_dto) > 1e-12) {
        c.fail(fmt("cell %s / %s: test_dto %.17g (naive %.17g) vs frozen %.17g",
                   m.method.c_str(), labels[ci].c_str(), got.test_dto, naive.test_dto,
                   want_dto));
        break;
      }
    }
  }

  // (b) per-criterion winners: exactly the frozen method, no ties.
  std::set<std::string> winners;
  for (std::size_t ci = 0; ci < labels.size() && c.pass; ++ci) {
    const std::string want = expected.at("winners").at(labels[ci]).get<std::string>();
    for (const auto& m : table.methods) {
      if (m.cells[ci].best != (m.method == want))
        c.fail("criterion " + labels[ci] + ": best flag on " + m.method +
               " contradicts the frozen winner " + want);
      if (m.cells[ci].tied) c.fail("criterion " + labels[ci] + ": unexpected tie");
    }
    winners.insert(want);
  }
  if (c.pass && winners.size() < 4)
    c.fail(fmt("only %zu distinct winning methods across the 7 criteria (need >= 4)",
               winners.size()));

  // (c) the AUC column: one strict total order, matching the frozen values.
  if (c.pass) {
    std::vector<std::pair<double, std::string>> aucs;
    for (const auto& m : table.methods) {
      const double want = expected.at("auc_values").at(m.method).get<double>();
      if (std::fabs(m.auc - want) > 1e-9)
        c.fail(fmt("auc of %s: %.12f vs frozen %.12f", m.method.c_str(), m.auc, want));
      if (m.auc_tied) c.fail("auc column holds a tie; expected a strict order");
      aucs.emplace_back(m.auc, m.method);
    }
    std::sort(aucs.rbegin(), aucs.rend());
    const auto& order = expected.at("auc_order");
    for (std::size_t i = 0; i < aucs.size() && c.pass; ++i) {
      if (aucs[i].second != order.at(i).get<std::string>())
        c.fail("auc order diverges from the frozen order at rank " + std::to_string(i));
      if (i + 1 < aucs.size() && !(aucs[i].first > aucs[i + 1].first))
        c.fail("auc order is not strict at rank " + std::to_string(i));
    }
  }

  c.note(fmt("4 methods x 7 criteria vs naive oracle and frozen table; %zu distinct "
             "winners; auc order strict",
             winners.size()));
  return c;
}

// ===== 9: end-to-end synthetic run ==========================================

Check end_to_end() {
  Check c;

  FixtureSpec fs;
  fs.schema.class_names = {"c0", "c1"};
  fs.schema.group_names = {"g0", "g1"};
  fs.n_per_cell = {{100000, 100000}, {100000, 100000}};
  fs.tpr_targets = {{0.90, 0.70}, {0.60, 0.60}};
  fs.confusion_spread = 1.0;
  fs.rng_seed = 42;

  const auto records = generate_fixture(fs);
  const auto confusions = confusions_from_records(records, fs.schema);
  const auto matrix =
      metric_matrix(confusions, BaseMetricKind::TPR, MeanMode::UnweightedGroupMean);

  double worst_gap = 0.0;
  for (std::size_t cl = 0; cl < 2; ++cl)
    for (std::size_t g = 0; g < 2; ++g) {
      if (!matrix.defined[cl][g]) {
        c.fail(fmt("cell (%zu,%zu) undefined at n = 100000", cl, g));
        continue;
      }
      const double gap = std::fabs(matrix.values[cl][g] - fs.tpr_targets[cl][g]);
      worst_gap = std::max(worst_gap, gap);
      if (gap > 0.01)
        c.fail(fmt("cell (%zu,%zu): empirical rate %.5f vs target %.2f (gap %.4f)", cl,
                   g, matrix.values[cl][g], fs.tpr_targets[cl][g], gap));
    }

  // Reference pipeline, hand-coded: per class the sum of absolute gaps to
  // the unweighted mean, quadratic mean across classes, fairness = 1 - delta.
  const auto got = aggregate(matrix, preset("paper_4_1"));
  double sq = 0.0;
  std::vector<double> betas(2);
  for (std::size_t cl = 0; cl < 2; ++cl) {
    const double mu = (matrix.values[cl][0] + matrix.values[cl][1]) / 2.0;
    betas[cl] = std::fabs(matrix.values[cl][0] - mu) + std::fabs(matrix.values[cl][1] - mu);
    sq += betas[cl] * betas[cl];
  }
  const double delta = std::sqrt(sq / 2.0);
  const double fairness = std::min(1.0, std::max(0.0, 1.0 - delta));

  double err = std::fabs(got.fairness - fairness);
  err = std::max(err, std::fabs(got.delta - delta));
  for (std::size_t cl = 0; cl < 2; ++cl)
    err = std::max(err, std::fabs(got.betas[cl] - betas[cl]));
  if (err > 1e-12)
    c.fail(fmt("aggregation disagrees with the hand-coded reference by %.3g", err));

  c.note(fmt("400k records; worst rate gap %.4f (tol 0.01); reference pipeline error "
             "%.3g",
             worst_gap, err));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <data-dir>\n");
    return 2;
  }
  const std::string data_dir = argv[1];

  struct Criterion {
    int index;
    const char* name;
    Check result;
  };

  std::vector<Criterion> checks;
  try {
    checks.push_back({1, "golden distance table", golden_distances()});
    checks.push_back({2, "generalized-mean monotonicity", mean_monotonicity()});
    checks.push_back({3, "preset formula equivalence", preset_equivalence()});
    checks.push_back({4, "pareto frontier brute-force oracle", pareto_oracle()});
    checks.push_back({5, "areas vs grid membership counts", area_grid_oracle()});
    checks.push_back({6, "polar complement of the area", polar_complement()});
    checks.push_back({7, "utopia-shift identity", utopia_shift_identity()});
    checks.push_back({8, "selection-divergence fixture", divergence_fixture(data_dir)});
    checks.push_back({9, "end-to-end synthetic pipeline", end_to_end()});
  } catch (const Error& e) {
    std::printf("[FAIL] unexpected library error: %s\n", e.what());
    return 1;
  }

  int failures = 0;
  for (const auto& [index, name, result] : checks) {
    std::printf("[%s] %d. %s: %s\n", result.pass ? "PASS" : "FAIL", index, name,
                result.detail.c_str());
    if (!result.pass) ++failures;
  }
  std::printf(
      "[DECLARED] 10. external-model comparison study: not reproducible here (needs "
      "the original trained checkpoints); the area and comparison machinery is "
      "covered by 5-8.\n");

  if (failures) {
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return 1;
  }
  std::printf("all %zu checked criteria passed\n", checks.size());
  return 0;
}
