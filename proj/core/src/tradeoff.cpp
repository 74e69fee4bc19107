#include "gfair/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gfair/errors.hpp"

namespace gfair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw InputError(std::string(what) + " must lie in [0,1] (got " + std::to_string(v) +
                     ")");
}

void check_point(const TradeoffPoint& p) {
  check_unit_interval(p.performance, "performance");
  check_unit_interval(p.fairness, "fairness");
}

void check_weights(const UtopiaPoint& u) {
  if (!(u.w_performance > 0.0) || !(u.w_fairness > 0.0) ||
      !std::isfinite(u.w_performance) || !std::isfinite(u.w_fairness))
    throw InputError("utopia weights must be finite and > 0");
}

// The Frontier invariant: performance strictly decreasing, fairness strictly
// increasing, everything in [0,1]. Hand-built frontiers are checked too.
void check_frontier(const Frontier& fr) {
  if (fr.points.empty()) throw InputError("empty frontier");
  for (const auto& p : fr.points) check_point(p);
  for (std::size_t i = 1; i < fr.points.size(); ++i) {
    if (!(fr.points[i].performance < fr.points[i - 1].performance) ||
        !(fr.points[i].fairness > fr.points[i - 1].fairness))
      throw InputError(
          "frontier points must be strictly decreasing in performance and "
          "strictly increasing in fairness");
  }
}

void check_dominates(const UtopiaPoint& u, const TradeoffPoint& p, const char* what) {
  if (!(u.performance >= p.performance) || !(u.fairness >= p.fairness))
    throw InputError(std::string(what) + " must dominate the point(s) it is measured from");
}

// Integral over y in [max(y_lo, y_min), y_hi] of max(0, x(y) - x_min), where
// x interpolates linearly from x_lo at y_lo to x_hi at y_hi. Every area in
// this file funnels through here, so a zero threshold reproduces the
// unconstrained area bit for bit.
double band_area(double x_lo, double x_hi, double y_lo, double y_hi, double x_min,
                 double y_min) {
  if (y_min > y_lo) {
    if (y_min >= y_hi) return 0.0;
    if (x_lo != x_hi) x_lo += (x_hi - x_lo) * (y_min - y_lo) / (y_hi - y_lo);
    y_lo = y_min;
  }
  const double h = y_hi - y_lo;
  if (!(h > 0.0)) return 0.0;
  const double w_lo = x_lo - x_min;
  const double w_hi = x_hi - x_min;
  if (w_lo <= 0.0 && w_hi <= 0.0) return 0.0;
  if (w_lo >= 0.0 && w_hi >= 0.0) return 0.5 * (w_lo + w_hi) * h;
  // x is monotone inside a band, so the width changes sign exactly once.
  const double y_star = y_lo + w_lo / (w_lo - w_hi) * h;
  if (w_lo > 0.0) return 0.5 * w_lo * (y_star - y_lo);
  return 0.5 * w_hi * (y_hi - y_star);
}

// Area of the attainment region clipped to {x >= x_min, y >= y_min}. The
// region is sliced into horizontal bands between consecutive fairness
// values; Step bands have constant width, Linear bands interpolate.
double clipped_area(const Frontier& fr, CurveMode mode, double x_min, double y_min) {
  double area = 0.0;
  double y_prev = 0.0;
  for (std::size_t i = 0; i < fr.points.size(); ++i) {
    const double y_hi = fr.points[i].fairness;
    double x_lo, x_hi;
    if (mode == CurveMode::Step || i == 0) {
      x_lo = x_hi = fr.points[i].performance;
    } else {
      x_lo = fr.points[i - 1].performance;
      x_hi = fr.points[i].performance;
    }
    area += band_area(x_lo, x_hi, y_prev, y_hi, x_min, y_min);
    y_prev = y_hi;
  }
  return area;
}

// Distance along the ray pole + t * (-cos, -sin) to the attainment region,
// +infinity if the ray never meets it before leaving the quadrant.
double ray_entry(const Frontier& fr, CurveMode mode, double pole_p, double pole_f,
                 double c, double s) {
  if (mode == CurveMode::Step) {
    // Each frontier point spans the rectangle [0,p] x [0,f]; the ray enters
    // rectangle i once both coordinates have dropped below its corner.
    double best = kInf;
    for (const auto& pt : fr.points) {
      const double t = std::max((pole_p - pt.performance) / c, (pole_f - pt.fairness) / s);
      best = std::min(best, t);
    }
    return best;
  }

  // Linear: intersect with the boundary polyline
  // (p1,0) -> (p1,f1) -> ... -> (pk,fk) -> (0,fk).
  const auto& pts = fr.points;
  std::vector<std::pair<double, double>> poly;
  poly.reserve(pts.size() + 2);
  poly.emplace_back(pts.front().performance, 0.0);
  for (const auto& pt : pts) poly.emplace_back(pt.performance, pt.fairness);
  poly.emplace_back(0.0, pts.back().fairness);

  double best = kInf;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const double ax = poly[i - 1].first, ay = poly[i - 1].second;
    const double ex = poly[i].first - ax, ey = poly[i].second - ay;
    const double rx = pole_p - ax, ry = pole_f - ay;
    const double det = c * ey - s * ex;
    if (det == 0.0) continue;  // parallel; neighbours cover the endpoints
    const double t = (rx * ey - ex * ry) / det;
    const double lambda = (c * ry - s * rx) / det;
    // t == 0 happens only when the pole sits on the boundary itself (a
    // one-point frontier whose best-observed utopia is that point); the ray
    // is then inside the region immediately.
    if (t >= 0.0 && lambda >= 0.0 && lambda <= 1.0) best = std::min(best, t);
  }
  return best;
}

}  // namespace

Frontier pareto_frontier(std::span<const TradeoffPoint> points) {
  if (points.empty()) throw InputError("no trade-off points given");
  for (const auto& p : points) check_point(p);

  std::vector<TradeoffPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.performance != b.performance) return a.performance > b.performance;
    return a.fairness > b.fairness;
  });

  Frontier fr;
  double best_fair = -kInf;
  for (const auto& p : sorted) {
    if (p.fairness > best_fair) {
      fr.points.push_back(p);
      best_fair = p.fairness;
    }
  }
  return fr;
}

double dto(const TradeoffPoint& point, const UtopiaPoint& utopia) {
  check_point(point);
  check_weights(utopia);
  check_dominates(utopia, point, "the utopia");
  const double dp = utopia.performance - point.performance;
  const double df = utopia.fairness - point.fairness;
  return std::sqrt(utopia.w_performance * dp * dp + utopia.w_fairness * df * df);
}

UtopiaPoint utopia_from_candidates(std::span<const TradeoffPoint> points,
                                   UtopiaMode mode) {
  if (points.empty()) throw InputError("no trade-off points given");
  UtopiaPoint u;
  if (mode == UtopiaMode::Fixed11) return u;
  u.performance = 0.0;
  u.fairness = 0.0;
  for (const auto& p : points) {
    check_point(p);
    u.performance = std::max(u.performance, p.performance);
    u.fairness = std::max(u.fairness, p.fairness);
  }
  return u;
}

double auc_pfc(const Frontier& frontier, CurveMode mode) {
  check_frontier(frontier);
  return clipped_area(frontier, mode, 0.0, 0.0);
}

double polar_dto_area(const Frontier& frontier, const UtopiaPoint& utopia,
                      CurveMode mode, int n_angles) {
  check_frontier(frontier);
  if (utopia.performance != 1.0 || utopia.fairness != 1.0 ||
      utopia.w_performance != 1.0 || utopia.w_fairness != 1.0)
    throw InputError("the polar area is defined from the unweighted (1,1) utopia");
  if (n_angles < 16) throw InputError("polar quadrature needs at least 16 angles");

  const double dtheta = (std::numbers::pi / 2.0) / n_angles;
  double area = 0.0;
  for (int j = 0; j < n_angles; ++j) {
    const double theta = (j + 0.5) * dtheta;
    const double c = std::cos(theta), s = std::sin(theta);
    const double t_exit = std::min(1.0 / c, 1.0 / s);
    const double t_a = ray_entry(frontier, mode, 1.0, 1.0, c, s);
    const double r = std::min(t_a, t_exit);
    area += 0.5 * r * r * dtheta;
  }
  return area;
}

double partial_auc_pfc(const Frontier& frontier, const PartialConstraint& constraint,
                       CurveMode mode, int resolution) {
  check_frontier(frontier);

  if (const auto* mp = std::get_if<MinPerformance>(&constraint)) {
    check_unit_interval(mp->threshold, "the performance threshold");
    return clipped_area(frontier, mode, mp->threshold, 0.0);
  }
  if (const auto* mf = std::get_if<MinFairness>(&constraint)) {
    check_unit_interval(mf->threshold, "the fairness threshold");
    return clipped_area(frontier, mode, 0.0, mf->threshold);
  }

  const auto& md = std::get<MaxDTO>(constraint);
  if (!(md.threshold >= 0.0) || !std::isfinite(md.threshold))
    throw InputError("the distance threshold must be finite and >= 0");
  check_weights(md.utopia);
  for (const auto& p : frontier.points) check_dominates(md.utopia, p, "the utopia");
  if (resolution < 16) throw InputError("polar quadrature needs at least 16 angles");
  if (md.threshold == 0.0) return 0.0;

  // Sweep rays from the utopia across the lower-left quadrant; each ray
  // meets the region over a single interval [t_entry, quadrant exit], so the
  // slice inside the disk is an annulus sector.
  const UtopiaPoint& u = md.utopia;
  const double dtheta = (std::numbers::pi / 2.0) / resolution;
  double area = 0.0;
  for (int j = 0; j < resolution; ++j) {
    const double theta = (j + 0.5) * dtheta;
    const double c = std::cos(theta), s = std::sin(theta);
    const double t_disk =
        md.threshold / std::sqrt(u.w_performance * c * c + u.w_fairness * s * s);
    const double t_exit = std::min(u.performance / c, u.fairness / s);
    const double t_far = std::min(t_disk, t_exit);
    const double t_a = ray_entry(frontier, mode, u.performance, u.fairness, c, s);
    if (t_far > t_a) area += 0.5 * (t_far * t_far - t_a * t_a) * dtheta;
  }
  return area;
}

std::pair<double, double> utopia_shift_check(const TradeoffPoint& q,
                                             const UtopiaPoint& utopia, double b) {
  if (utopia.w_performance != 1.0 || utopia.w_fairness != 1.0)
    throw InputError("the utopia-shift identity holds for unit weights only");
  if (!(b > 0.0) || !std::isfinite(b))
    throw InputError("the shift must be finite and > 0");
  UtopiaPoint shifted = utopia;
  shifted.performance += b;
  return {dto(q, utopia), dto(q, shifted)};
}

}  // namespace gfair
