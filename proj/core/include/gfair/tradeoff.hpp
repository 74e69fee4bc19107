// Trade-off geometry over (performance, fairness) points, both in [0,1] and
// larger-is-better: Pareto frontiers, distance to the utopia point (DTO),
// attainment-region areas (AUC-PFC, step and linear), the polar-coordinate
// complement of that area, and constrained (partial) areas.
#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace gfair {

struct TradeoffPoint {
  double performance = 0.0;
  double fairness = 0.0;

  bool operator==(const TradeoffPoint&) const = default;
};

// The reference ideal. Weights rescale the two axes inside DTO (squared
// distances are multiplied by them); both must be positive.
struct UtopiaPoint {
  double performance = 1.0;
  double fairness = 1.0;
  double w_performance = 1.0;
  double w_fairness = 1.0;
};

// Non-dominated points, deduplicated, sorted by performance strictly
// decreasing / fairness strictly increasing.
struct Frontier {
  std::vector<TradeoffPoint> points;
};

enum class CurveMode { Step, Linear };

// Exactly the non-dominated subset of the input (which must be non-empty,
// with all coordinates in [0,1]).
Frontier pareto_frontier(std::span<const TradeoffPoint> points);

// sqrt(w_p (u_p - p)^2 + w_f (u_f - f)^2). The utopia must dominate the
// point (coordinates >= the point's); it is 0 iff the point is the utopia.
double dto(const TradeoffPoint& point, const UtopiaPoint& utopia);

enum class UtopiaMode { Fixed11, BestObserved };

// Fixed11 -> (1,1); BestObserved -> coordinate-wise maxima of the points.
UtopiaPoint utopia_from_candidates(std::span<const TradeoffPoint> points,
                                   UtopiaMode mode);

// Area of the attainment region {(x,y) : some frontier point dominates
// (x,y)}. Step treats the frontier as a staircase of realized models;
// Linear joins adjacent frontier points with segments (the axis-parallel
// extensions at both ends stay), modeling interpolation between models.
double auc_pfc(const Frontier& frontier, CurveMode mode);

// Midpoint-rule quadrature of (1/2) Int r(theta)^2 dtheta where r is the
// distance from the pole (1,1) to the attainment boundary; converges to
// 1 - auc_pfc as n_angles grows. Requires utopia (1,1) with unit weights
// and n_angles >= 16.
double polar_dto_area(const Frontier& frontier, const UtopiaPoint& utopia,
                      CurveMode mode, int n_angles);

// Constraints for partial areas. Thresholds live on the same [0,1] scales.
struct MinPerformance {
  double threshold = 0.0;
};
struct MinFairness {
  double threshold = 0.0;
};
struct MaxDTO {
  double threshold = 0.0;
  UtopiaPoint utopia;
};
using PartialConstraint = std::variant<MinPerformance, MinFairness, MaxDTO>;

// Area of the attainment region intersected with the constraint set.
// MinPerformance / MinFairness are closed-form (and reproduce auc_pfc
// bit-exactly at threshold 0); MaxDTO integrates in polar coordinates from
// the constraint's utopia with `resolution` angles (>= 16). An infeasible
// constraint yields 0, not an error.
double partial_auc_pfc(const Frontier& frontier, const PartialConstraint& constraint,
                       CurveMode mode, int resolution = 10000);

// Diagnostic for the utopia-shift identity: returns (d_before, d_after)
// where d_after is the DTO after moving the utopia by +b in performance.
// The pair satisfies d_after^2 - d_before^2 = b^2 + 2 b (u_p - q_p), so of
// two points with equal DTO the one with worse performance ends up strictly
// farther. Requires unit weights and a dominating utopia; b > 0. The
// shifted utopia may leave [0,1]; that is fine here.
std::pair<double, double> utopia_shift_check(const TradeoffPoint& q,
                                             const UtopiaPoint& utopia, double b);

}  // namespace gfair
