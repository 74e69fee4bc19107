// The two-step aggregation engine. Step one maps each class row of the
// metric matrix to a basic unit (score, gap to the class mean, ratio to the
// class mean, or a slack indicator) and collapses the groups with a weighted
// generalized mean (or one of the closed Table-style variants: sum,
// variance, max-min span, max/min span). Step two collapses the per-class
// betas into a single delta, which is normalized to a fairness value in
// [0,1] where larger is always fairer.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfair/group_metrics.hpp"

namespace gfair {

// ===== basic units ==========================================================

enum class UnitKind {
  Score,           // M_cg
  Gap,             // |M_cg - mean_c|
  Ratio,           // M_cg / mean_c
  GapThreshold,    // 1 if |M_cg - mean_c| <= gamma
  RatioThreshold,  // 1 if |M_cg / mean_c - 1| <= gamma
};

struct BasicUnit {
  UnitKind kind = UnitKind::Score;
  double gamma = 0.0;  // slack; required (> 0) for the threshold kinds
};

std::string_view unit_kind_name(UnitKind kind);
std::optional<UnitKind> unit_kind_from_name(std::string_view name);

// ===== spec =================================================================

// How the group dimension collapses. PowerMean is the general mechanism; the
// others are closed forms of specific presets and reject explicit weights.
enum class GroupForm {
  PowerMean,       // weighted generalized mean with exponent group_p
  Sum,             // plain sum over defined cells (= defined-count x mean)
  Variance,        // sum of squared gaps / (defined-count - 1)
  SpanDifference,  // max - min of the unit values
  SpanRatio,       // max / min of the unit values
};

enum class ClassMethod { Mean, QuadraticMean, Binary, GeneralizedMean };

struct ClassAggregation {
  ClassMethod method = ClassMethod::Mean;
  std::size_t binary_class = 1;  // Binary: which beta is delta
  double p = 1.0;                // GeneralizedMean exponent
};

// Whether small or large delta means fair, fixing the normalization map:
//   SmallerFairer  fairness = 1 - delta   (gaps, variances, spans)
//   LargerFairer   fairness = delta       (scores, satisfied fractions)
//   RatioAroundOne fairness = min(delta, 1/delta)
enum class Direction { SmallerFairer, LargerFairer, RatioAroundOne };

std::string_view direction_name(Direction d);
std::optional<Direction> direction_from_name(std::string_view name);

struct AggregationSpec {
  BasicUnit unit;
  GroupForm group_form = GroupForm::PowerMean;
  double group_p = 1.0;  // finite nonzero or +-infinity; 0 is rejected
  // Length-G non-negative weights summing to 1 (within 1e-9). Only valid
  // with GroupForm::PowerMean; renormalized over defined cells per row.
  std::optional<std::vector<double>> group_weights;
  ClassAggregation class_method;
  Direction direction = Direction::SmallerFairer;
  // When set, the matrix's mean_mode must match (the preset was derived
  // under a specific reference-mean reading).
  std::optional<MeanMode> mean_mode;
  std::string preset_name;  // "" when hand-built; echoed in reports

  // Throws InputError on inconsistencies (bad gamma, bad weights, a
  // direction that contradicts the unit/form, p == 0, ...).
  void validate() const;
};

struct AggregationOutcome {
  std::vector<double> betas;  // one per class row
  double delta = 0.0;
  double fairness = 0.0;
  bool clamped = false;  // normalization had to clamp into [0,1]
};

// ===== operations ===========================================================

// Weighted generalized mean M_p(values). p = +inf -> max, p = -inf -> min,
// p = 0 rejected (the geometric mean is intentionally not provided). All
// values must be finite and >= 0. If any value is 0 and p < 0 the continuous
// limit 0 is returned. Weights, when given, must be non-negative and sum to
// 1 within 1e-9; entries with zero weight are dropped first, and equal
// weights reproduce the unweighted mean exactly.
double generalized_mean(std::span<const double> values, double p,
                        std::span<const double> weights = {});

// Applies the basic unit to one class row. Masked cells stay masked. The
// ratio kinds require class_mean > 0.
std::vector<std::optional<double>> unit_transform(
    std::span<const std::optional<double>> row, double class_mean,
    const BasicUnit& unit);

// beta_c for one class row; errors when every cell is masked (and, for
// Variance, when fewer than two cells are defined; for SpanRatio, when the
// smallest unit value is 0).
double group_aggregate(std::span<const std::optional<double>> row,
                       double class_mean, const AggregationSpec& spec);

// delta from the betas.
double class_aggregate(std::span<const double> betas, const ClassAggregation& method);

// Full pipeline over a metric matrix. Betas are indexed by class.
AggregationOutcome aggregate(const MetricMatrix& matrix, const AggregationSpec& spec);

// Normalizes delta into a fairness value per spec.direction; *clamped (when
// non-null) reports whether clamping changed the value. RatioAroundOne
// rejects delta <= 0.
double normalize(double delta, const AggregationSpec& spec, bool* clamped = nullptr);

// Named presets: mean_gap, variance, max_gap, min_score, min_ratio,
// max_difference, max_ratio, difference_threshold, ratio_threshold (these
// two require gamma), binary, quadratic_mean, mean, and paper_4_1 (gap sum
// over groups, quadratic mean over classes, fairness = 1 - delta). Presets
// that do not take a slack reject a supplied gamma.
AggregationSpec preset(std::string_view name, std::optional<double> gamma = {});

std::vector<std::string_view> preset_names();

// ===== recommender ==========================================================

// The decision-path recommender. Per-group focus always yields min-score
// (the worst-off group is the bound); inter-group focus picks gap or ratio
// units, extrema pick the worst case (max gap / min ratio), averages pick
// p = 1, raised to p = 2 when emphasize_high_bias is set.
struct DecisionAnswers {
  enum class Scope { PerGroup, InterGroup };
  enum class Comparison { Absolute, Relative };
  enum class Focus { Extrema, Average };

  Scope scope = Scope::InterGroup;
  Comparison comparison = Comparison::Absolute;
  Focus focus = Focus::Average;
  bool emphasize_high_bias = false;
};

AggregationSpec recommend(const DecisionAnswers& answers);

}  // namespace gfair
