// Per-group classification metrics: build confusions from records and turn
// them into the C x G matrix M of a base metric, with per-class reference
// means. Every metric is computed one-vs-all (class c positive, the rest
// negative), so all kinds are defined per class in multiclass settings.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfair/schema.hpp"

namespace gfair {

enum class BaseMetricKind { TPR, TNR, FPR, PPR, Precision, Accuracy, F1 };

std::string_view metric_name(BaseMetricKind kind);
std::optional<BaseMetricKind> metric_from_name(std::string_view name);

// How the per-class reference mean is computed:
//   Pooled             metric of the merged counts of all groups (exact);
//   UnweightedGroupMean arithmetic mean of the defined per-group cells.
enum class MeanMode { Pooled, UnweightedGroupMean };

std::string_view mean_mode_name(MeanMode mode);
std::optional<MeanMode> mean_mode_from_name(std::string_view name);

// The matrix M. Cells whose denominator is empty (e.g. a group with no
// instances of a class, for TPR) are masked out rather than imputed as 0;
// masked cells are excluded from class means and from aggregation.
struct MetricMatrix {
  BaseMetricKind kind = BaseMetricKind::TPR;
  MeanMode mean_mode = MeanMode::Pooled;
  std::vector<std::vector<double>> values;  // [c][g]; meaningful iff defined
  std::vector<std::vector<bool>> defined;   // [c][g]
  std::vector<double> class_means;          // [c]

  std::size_t num_classes() const { return values.size(); }
  std::size_t num_groups() const { return values.empty() ? 0 : values[0].size(); }
};

// counts[g][c][c'] = #records with group g, true class c, predicted c'.
// Permutation-invariant in record order.
GroupedConfusions confusions_from_records(const std::vector<PredictionRecord>& records,
                                          const DatasetSchema& schema);

// Throws InputError when some class has no defined cell in any group.
MetricMatrix metric_matrix(const GroupedConfusions& confusions, BaseMetricKind kind,
                           MeanMode mean_mode);

// Diagonal mass over total mass, across all groups. Errors on zero total.
double overall_accuracy(const GroupedConfusions& confusions);

// CSV with columns class,group,value,defined,class_mean; masked cells print
// the explicit marker "NA" instead of a number.
std::string disaggregated_table(const MetricMatrix& matrix, const DatasetSchema& schema);

}  // namespace gfair
