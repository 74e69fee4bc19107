#include "gfair/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gfair/errors.hpp"

namespace gfair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_equal(std::span<const double> v) {
  for (double x : v)
    if (x != v.front()) return false;
  return true;
}

}  // namespace

// ===== generalized mean =====================================================

double generalized_mean(std::span<const double> values, double p,
                        std::span<const double> weights) {
  if (values.empty()) throw InputError("generalized mean of an empty list");
  if (std::isnan(p)) throw InputError("generalized mean exponent must not be NaN");
  if (p == 0.0)
    throw InputError(
        "exponent 0 is rejected (the geometric-mean case is intentionally not provided)");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("generalized mean over a non-finite value");
    if (v < 0.0) throw InputError("generalized mean over a negative value");
  }

  // Weight validation; entries with zero weight are dropped entirely so the
  // +-infinity limits range over the support only. Equal weights delegate to
  // the unweighted path, which makes uniform weighting reproduce the
  // unweighted mean exactly (not merely up to rounding).
  std::vector<double> wv, xv;
  if (!weights.empty()) {
    if (weights.size() != values.size())
      throw InputError("weights length " + std::to_string(weights.size()) +
                       " does not match " + std::to_string(values.size()) + " values");
    double sum = 0.0;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InputError("weights must sum to 1 (got " + std::to_string(sum) + ")");
    if (!all_equal(weights)) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] == 0.0) continue;
        wv.push_back(weights[i]);
        xv.push_back(values[i]);
      }
      values = xv;
      weights = wv;
    } else {
      weights = {};
    }
  }

  // Constant vectors short-circuit so idempotence M_p(v,...,v) = v is exact
  // for every p (the p = 1 path would otherwise round, e.g. 3*0.1/3 != 0.1).
  if (all_equal(values)) return values.front();

  if (p == kInf) return *std::max_element(values.begin(), values.end());
  const double min_v = *std::min_element(values.begin(), values.end());
  if (p == -kInf) return min_v;
  if (p < 0.0 && min_v == 0.0) return 0.0;  // continuous limit of M_p
  if (p == 1.0) {
    // Plain (weighted) average; also the fast path the Table-style preset
    // oracles compare against, so keep the summation order obvious.
    double acc = 0.0;
    if (weights.empty()) {
      for (double v : values) acc += v;
      return acc / static_cast<double>(values.size());
    }
    double wsum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      acc += weights[i] * values[i];
      wsum += weights[i];
    }
    return acc / wsum;
  }

  // Scale by the largest (p > 0) or smallest (p < 0) value so every power
  // stays in (0,1] — no overflow, and constant vectors come out exact.
  const double s = p > 0.0 ? *std::max_element(values.begin(), values.end()) : min_v;
  if (s == 0.0) return 0.0;  // all zeros (p > 0)
  double acc = 0.0, wsum = 0.0;
  if (weights.empty()) {
    for (double v : values) acc += std::pow(v / s, p);
    wsum = static_cast<double>(values.size());
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      acc += weights[i] * std::pow(values[i] / s, p);
      wsum += weights[i];
    }
  }
  return s * std::pow(acc / wsum, 1.0 / p);
}

// ===== units ================================================================

std::string_view unit_kind_name(UnitKind kind) {
  switch (kind) {
    case UnitKind::Score: return "score";
    case UnitKind::Gap: return "gap";
    case UnitKind::Ratio: return "ratio";
    case UnitKind::GapThreshold: return "gap_threshold";
    case UnitKind::RatioThreshold: return "ratio_threshold";
  }
  throw InternalError("unhandled UnitKind");
}

std::optional<UnitKind> unit_kind_from_name(std::string_view name) {
  for (auto k : {UnitKind::Score, UnitKind::Gap, UnitKind::Ratio, UnitKind::GapThreshold,
                 UnitKind::RatioThreshold})
    if (unit_kind_name(k) == name) return k;
  return std::nullopt;
}

std::vector<std::optional<double>> unit_transform(
    std::span<const std::optional<double>> row, double class_mean, const BasicUnit& unit) {
  const bool needs_mean = unit.kind != UnitKind::Score;
  const bool ratio_like =
      unit.kind == UnitKind::Ratio || unit.kind == UnitKind::RatioThreshold;
  if (ratio_like && class_mean <= 0.0)
    throw InputError("ratio units need a positive class mean (got " +
                     std::to_string(class_mean) + ")");
  if ((unit.kind == UnitKind::GapThreshold || unit.kind == UnitKind::RatioThreshold) &&
      !(unit.gamma > 0.0 && std::isfinite(unit.gamma)))
    throw InputError("threshold units need a finite slack gamma > 0");
  (void)needs_mean;

  std::vector<std::optional<double>> out(row.begin(), row.end());
  for (auto& cell : out) {
    if (!cell) continue;
    switch (unit.kind) {
      case UnitKind::Score: break;
      case UnitKind::Gap: cell = std::abs(*cell - class_mean); break;
      case UnitKind::Ratio: cell = *cell / class_mean; break;
      case UnitKind::GapThreshold:
        cell = std::abs(*cell - class_mean) <= unit.gamma ? 1.0 : 0.0;
        break;
      case UnitKind::RatioThreshold:
        cell = std::abs(*cell / class_mean - 1.0) <= unit.gamma ? 1.0 : 0.0;
        break;
    }
  }
  return out;
}

// ===== spec validation ======================================================

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::SmallerFairer: return "smaller_fairer";
    case Direction::LargerFairer: return "larger_fairer";
    case Direction::RatioAroundOne: return "ratio_around_one";
  }
  throw InternalError("unhandled Direction");
}

std::optional<Direction> direction_from_name(std::string_view name) {
  for (auto d :
       {Direction::SmallerFairer, Direction::LargerFairer, Direction::RatioAroundOne})
    if (direction_name(d) == name) return d;
  return std::nullopt;
}

void AggregationSpec::validate() const {
  const bool threshold_unit =
      unit.kind == UnitKind::GapThreshold || unit.kind == UnitKind::RatioThreshold;
  if (threshold_unit && !(unit.gamma > 0.0 && std::isfinite(unit.gamma)))
    throw InputError("threshold units need a finite slack gamma > 0");
  if (!threshold_unit && unit.gamma != 0.0)
    throw InputError("gamma is only meaningful for threshold units");

  if (group_form == GroupForm::PowerMean) {
    if (std::isnan(group_p)) throw InputError("group exponent must not be NaN");
    if (group_p == 0.0)
      throw InputError(
          "group exponent 0 is rejected (the geometric mean is intentionally not provided)");
  } else {
    if (group_weights)
      throw InputError("group weights are only supported with power-mean aggregation");
    if (group_form == GroupForm::Variance && unit.kind != UnitKind::Gap)
      throw InputError("variance aggregation is defined over gap units");
    if ((group_form == GroupForm::SpanDifference || group_form == GroupForm::SpanRatio) &&
        unit.kind != UnitKind::Score)
      throw InputError("span aggregation is defined over score units");
  }

  if (group_weights) {
    double sum = 0.0;
    for (double w : *group_weights) {
      if (!std::isfinite(w) || w < 0.0)
        throw InputError("group weights must be finite and >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InputError("group weights must sum to 1 (got " + std::to_string(sum) + ")");
  }

  if (class_method.method == ClassMethod::GeneralizedMean) {
    if (std::isnan(class_method.p)) throw InputError("class exponent must not be NaN");
    if (class_method.p == 0.0) throw InputError("class exponent 0 is rejected");
  }

  // Direction consistency: the normalization map must match what the chosen
  // unit/form measures, otherwise "fairness" would grow with disparity.
  const auto allowed = [&](Direction d) {
    switch (group_form) {
      case GroupForm::SpanDifference: return d == Direction::SmallerFairer;
      case GroupForm::SpanRatio: return d == Direction::RatioAroundOne;
      case GroupForm::Variance: return d == Direction::SmallerFairer;
      case GroupForm::Sum:
      case GroupForm::PowerMean:
        switch (unit.kind) {
          case UnitKind::Score: return d == Direction::LargerFairer;
          case UnitKind::Gap: return d == Direction::SmallerFairer;
          case UnitKind::Ratio:
            return d == Direction::LargerFairer || d == Direction::RatioAroundOne;
          case UnitKind::GapThreshold:
          case UnitKind::RatioThreshold: return d == Direction::LargerFairer;
        }
    }
    return false;
  };
  if (!allowed(direction))
    throw InputError(std::string("direction ") + std::string(direction_name(direction)) +
                     " contradicts unit '" + std::string(unit_kind_name(unit.kind)) + "'");
}

// ===== group / class stages =================================================

double group_aggregate(std::span<const std::optional<double>> row, double class_mean,
                       const AggregationSpec& spec) {
  spec.validate();
  if (spec.group_weights && spec.group_weights->size() != row.size())
    throw InputError("group weights length " + std::to_string(spec.group_weights->size()) +
                     " does not match " + std::to_string(row.size()) + " groups");
  const auto units = unit_transform(row, class_mean, spec.unit);

  std::vector<double> vals;
  std::vector<double> w;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!units[i]) continue;
    vals.push_back(*units[i]);
    if (spec.group_weights) w.push_back((*spec.group_weights)[i]);
  }
  if (vals.empty()) throw InputError("every cell of the class row is masked");

  switch (spec.group_form) {
    case GroupForm::PowerMean: {
      if (spec.group_weights) {
        // Renormalize the surviving weights over the defined cells.
        double sum = 0.0;
        for (double x : w) sum += x;
        if (sum <= 0.0) throw InputError("all defined cells carry zero weight");
        for (double& x : w) x /= sum;
        return generalized_mean(vals, spec.group_p, w);
      }
      return generalized_mean(vals, spec.group_p);
    }
    case GroupForm::Sum: {
      double acc = 0.0;
      for (double v : vals) acc += v;
      return acc;
    }
    case GroupForm::Variance: {
      if (vals.size() < 2)
        throw InputError("variance aggregation needs at least 2 defined cells");
      double acc = 0.0;
      for (double v : vals) acc += v * v;  // units are |gap|, so v^2 = gap^2
      return acc / static_cast<double>(vals.size() - 1);
    }
    case GroupForm::SpanDifference: {
      const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
      return *mx - *mn;
    }
    case GroupForm::SpanRatio: {
      const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
      if (*mn == 0.0)
        throw InputError("max/min ratio is undefined when the smallest score is 0");
      return *mx / *mn;
    }
  }
  throw InternalError("unhandled GroupForm");
}

double class_aggregate(std::span<const double> betas, const ClassAggregation& method) {
  if (betas.empty()) throw InputError("class aggregation over no classes");
  switch (method.method) {
    case ClassMethod::Mean: {
      double acc = 0.0;
      for (double b : betas) acc += b;
      return acc / static_cast<double>(betas.size());
    }
    case ClassMethod::QuadraticMean: {
      double acc = 0.0;
      for (double b : betas) acc += b * b;
      return std::sqrt(acc / static_cast<double>(betas.size()));
    }
    case ClassMethod::Binary: {
      if (method.binary_class >= betas.size())
        throw InputError("binary class index " + std::to_string(method.binary_class) +
                         " out of range for " + std::to_string(betas.size()) + " classes");
      return betas[method.binary_class];
    }
    case ClassMethod::GeneralizedMean:
      return generalized_mean(betas, method.p);
  }
  throw InternalError("unhandled ClassMethod");
}

double normalize(double delta, const AggregationSpec& spec, bool* clamped) {
  if (!std::isfinite(delta)) throw InputError("delta must be finite");
  const auto clamp01 = [&](double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    if (clamped) *clamped = c != v;
    return c;
  };
  switch (spec.direction) {
    case Direction::SmallerFairer: return clamp01(1.0 - delta);
    case Direction::LargerFairer: return clamp01(delta);
    case Direction::RatioAroundOne:
      if (delta <= 0.0)
        throw InputError("ratio normalization needs delta > 0 (got " +
                         std::to_string(delta) + ")");
      return clamp01(std::min(delta, 1.0 / delta));
  }
  throw InternalError("unhandled Direction");
}

AggregationOutcome aggregate(const MetricMatrix& matrix, const AggregationSpec& spec) {
  spec.validate();
  if (spec.mean_mode && *spec.mean_mode != matrix.mean_mode)
    throw InputError(std::string("this aggregation expects mean mode '") +
                     std::string(mean_mode_name(*spec.mean_mode)) + "' but the matrix was " +
                     "built with '" + std::string(mean_mode_name(matrix.mean_mode)) + "'");
  const std::size_t c = matrix.num_classes();
  const std::size_t g = matrix.num_groups();
  if (c == 0 || g == 0) throw InputError("empty metric matrix");
  if (spec.group_weights && spec.group_weights->size() != g)
    throw InputError("group weights length " + std::to_string(spec.group_weights->size()) +
                     " does not match " + std::to_string(g) + " groups");

  AggregationOutcome out;
  out.betas.reserve(c);
  std::vector<std::optional<double>> row(g);
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t gi = 0; gi < g; ++gi)
      row[gi] = matrix.defined[ci][gi] ? std::optional<double>(matrix.values[ci][gi])
                                       : std::nullopt;
    out.betas.push_back(group_aggregate(row, matrix.class_means[ci], spec));
  }
  out.delta = class_aggregate(out.betas, spec.class_method);
  out.fairness = normalize(out.delta, spec, &out.clamped);
  return out;
}

// ===== presets ==============================================================

namespace {

AggregationSpec make_spec(UnitKind unit, GroupForm form, double p, ClassMethod cm,
                          Direction dir, std::string name) {
  AggregationSpec s;
  s.unit.kind = unit;
  s.group_form = form;
  s.group_p = p;
  s.class_method.method = cm;
  s.direction = dir;
  s.preset_name = std::move(name);
  return s;
}

}  // namespace

std::vector<std::string_view> preset_names() {
  return {"mean_gap",      "variance",       "max_gap",
          "min_score",     "min_ratio",      "max_difference",
          "max_ratio",     "difference_threshold", "ratio_threshold",
          "binary",        "quadratic_mean", "mean",
          "paper_4_1"};
}

AggregationSpec preset(std::string_view name, std::optional<double> gamma) {
  const bool takes_gamma = name == "difference_threshold" || name == "ratio_threshold";
  if (!takes_gamma && gamma)
    throw InputError("preset '" + std::string(name) + "' does not take a slack gamma");
  if (takes_gamma && !gamma)
    throw InputError("preset '" + std::string(name) + "' needs an explicit slack gamma");

  AggregationSpec s;
  // Group-level presets default to a plain mean over classes; class-level
  // presets default to the mean-gap group stage they are usually paired
  // with. Either half can be overridden after the call.
  if (name == "mean_gap") {
    s = make_spec(UnitKind::Gap, GroupForm::PowerMean, 1.0, ClassMethod::Mean,
                  Direction::SmallerFairer, std::string(name));
  } else if (name == "variance") {
    s = make_spec(UnitKind::Gap, GroupForm::Variance, 1.0, ClassMethod::Mean,
                  Direction::SmallerFairer, std::string(name));
  } else if (name == "max_gap") {
    s = make_spec(UnitKind::Gap, GroupForm::PowerMean, kInf, ClassMethod::Mean,
                  Direction::SmallerFairer, std::string(name));
  } else if (name == "min_score") {
    s = make_spec(UnitKind::Score, GroupForm::PowerMean, -kInf, ClassMethod::Mean,
                  Direction::LargerFairer, std::string(name));
  } else if (name == "min_ratio") {
    s = make_spec(UnitKind::Ratio, GroupForm::PowerMean, -kInf, ClassMethod::Mean,
                  Direction::LargerFairer, std::string(name));
  } else if (name == "max_difference") {
    s = make_spec(UnitKind::Score, GroupForm::SpanDifference, 1.0, ClassMethod::Mean,
                  Direction::SmallerFairer, std::string(name));
  } else if (name == "max_ratio") {
    s = make_spec(UnitKind::Score, GroupForm::SpanRatio, 1.0, ClassMethod::Mean,
                  Direction::RatioAroundOne, std::string(name));
  } else if (name == "difference_threshold") {
    s = make_spec(UnitKind::GapThreshold, GroupForm::PowerMean, 1.0, ClassMethod::Mean,
                  Direction::LargerFairer, std::string(name));
    s.unit.gamma = *gamma;
  } else if (name == "ratio_threshold") {
    s = make_spec(UnitKind::RatioThreshold, GroupForm::PowerMean, 1.0, ClassMethod::Mean,
                  Direction::LargerFairer, std::string(name));
    s.unit.gamma = *gamma;
  } else if (name == "binary") {
    s = make_spec(UnitKind::Gap, GroupForm::PowerMean, 1.0, ClassMethod::Binary,
                  Direction::SmallerFairer, std::string(name));
    s.class_method.binary_class = 1;
  } else if (name == "quadratic_mean") {
    s = make_spec(UnitKind::Gap, GroupForm::PowerMean, 1.0, ClassMethod::QuadraticMean,
                  Direction::SmallerFairer, std::string(name));
  } else if (name == "mean") {
    s = make_spec(UnitKind::Gap, GroupForm::PowerMean, 1.0, ClassMethod::Mean,
                  Direction::SmallerFairer, std::string(name));
  } else if (name == "paper_4_1") {
    // Unweighted sum of gaps over groups, then the quadratic mean over
    // classes, reported as fairness = 1 - delta (clamped).
    s = make_spec(UnitKind::Gap, GroupForm::Sum, 1.0, ClassMethod::QuadraticMean,
                  Direction::SmallerFairer, std::string(name));
  } else {
    throw InputError("unknown preset '" + std::string(name) + "'");
  }
  s.validate();
  return s;
}

AggregationSpec recommend(const DecisionAnswers& answers) {
  AggregationSpec s;
  s.preset_name = "recommended";
  s.class_method.method = ClassMethod::Mean;

  if (answers.scope == DecisionAnswers::Scope::PerGroup) {
    // Per-group fairness reads the raw scores and bounds the worst-off
    // group from below, whatever the other answers say.
    s.unit.kind = UnitKind::Score;
    s.group_p = -kInf;
    s.direction = Direction::LargerFairer;
    s.validate();
    return s;
  }

  const bool relative = answers.comparison == DecisionAnswers::Comparison::Relative;
  s.unit.kind = relative ? UnitKind::Ratio : UnitKind::Gap;
  if (answers.focus == DecisionAnswers::Focus::Extrema) {
    // Worst case: the largest gap, or the smallest ratio (the q%-rule view).
    s.group_p = relative ? -kInf : kInf;
    s.direction = relative ? Direction::LargerFairer : Direction::SmallerFairer;
  } else {
    s.group_p = answers.emphasize_high_bias ? 2.0 : 1.0;
    s.direction = relative ? Direction::RatioAroundOne : Direction::SmallerFairer;
  }
  s.validate();
  return s;
}

}  // namespace gfair
