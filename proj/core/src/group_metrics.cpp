#include "gfair/group_metrics.hpp"

#include <cstdio>
#include <sstream>
#include <string>

#include "gfair/errors.hpp"

namespace gfair {

std::string_view metric_name(BaseMetricKind kind) {
  switch (kind) {
    case BaseMetricKind::TPR: return "tpr";
    case BaseMetricKind::TNR: return "tnr";
    case BaseMetricKind::FPR: return "fpr";
    case BaseMetricKind::PPR: return "ppr";
    case BaseMetricKind::Precision: return "precision";
    case BaseMetricKind::Accuracy: return "accuracy";
    case BaseMetricKind::F1: return "f1";
  }
  throw InternalError("unhandled BaseMetricKind");
}

std::optional<BaseMetricKind> metric_from_name(std::string_view name) {
  for (auto k : {BaseMetricKind::TPR, BaseMetricKind::TNR, BaseMetricKind::FPR,
                 BaseMetricKind::PPR, BaseMetricKind::Precision, BaseMetricKind::Accuracy,
                 BaseMetricKind::F1})
    if (metric_name(k) == name) return k;
  return std::nullopt;
}

std::string_view mean_mode_name(MeanMode mode) {
  switch (mode) {
    case MeanMode::Pooled: return "pooled";
    case MeanMode::UnweightedGroupMean: return "group_mean";
  }
  throw InternalError("unhandled MeanMode");
}

std::optional<MeanMode> mean_mode_from_name(std::string_view name) {
  if (name == "pooled") return MeanMode::Pooled;
  if (name == "group_mean") return MeanMode::UnweightedGroupMean;
  return std::nullopt;
}

namespace {

// One-vs-all view of class c within one C x C count block.
struct OneVsAll {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

OneVsAll one_vs_all(const std::vector<std::vector<std::int64_t>>& block, std::size_t c) {
  OneVsAll t;
  std::int64_t total = 0;
  for (std::size_t r = 0; r < block.size(); ++r) {
    for (std::size_t p = 0; p < block[r].size(); ++p) {
      const std::int64_t n = block[r][p];
      total += n;
      if (r == c && p == c) t.tp += n;
      else if (r == c) t.fn += n;
      else if (p == c) t.fp += n;
    }
  }
  t.tn = total - t.tp - t.fn - t.fp;
  return t;
}

// The metric value, or nullopt when its denominator is empty. Imputing 0
// instead would fabricate maximal bias for tiny groups.
std::optional<double> evaluate(BaseMetricKind kind, const OneVsAll& t) {
  const auto ratio = [](std::int64_t num, std::int64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  const std::int64_t n = t.tp + t.fp + t.fn + t.tn;
  switch (kind) {
    case BaseMetricKind::TPR: return ratio(t.tp, t.tp + t.fn);
    case BaseMetricKind::TNR: return ratio(t.tn, t.tn + t.fp);
    case BaseMetricKind::FPR: return ratio(t.fp, t.fp + t.tn);
    case BaseMetricKind::PPR: return ratio(t.tp + t.fp, n);
    case BaseMetricKind::Precision: return ratio(t.tp, t.tp + t.fp);
    case BaseMetricKind::Accuracy: return ratio(t.tp + t.tn, n);
    case BaseMetricKind::F1: return ratio(2 * t.tp, 2 * t.tp + t.fp + t.fn);
  }
  throw InternalError("unhandled BaseMetricKind");
}

}  // namespace

GroupedConfusions confusions_from_records(const std::vector<PredictionRecord>& records,
                                          const DatasetSchema& schema) {
  schema.validate();
  const std::size_t c = schema.num_classes();
  GroupedConfusions out;
  out.schema = schema;
  out.counts.assign(schema.num_groups(),
                    std::vector<std::vector<std::int64_t>>(c, std::vector<std::int64_t>(c, 0)));
  for (const auto& r : records) {
    if (r.group >= schema.num_groups() || r.true_class >= c || r.predicted_class >= c)
      throw InputError("record '" + r.instance_id + "' has indices outside the schema");
    ++out.counts[r.group][r.true_class][r.predicted_class];
  }
  return out;
}

MetricMatrix metric_matrix(const GroupedConfusions& confusions, BaseMetricKind kind,
                           MeanMode mean_mode) {
  confusions.validate();
  const std::size_t c = confusions.schema.num_classes();
  const std::size_t g = confusions.schema.num_groups();

  MetricMatrix m;
  m.kind = kind;
  m.mean_mode = mean_mode;
  m.values.assign(c, std::vector<double>(g, 0.0));
  m.defined.assign(c, std::vector<bool>(g, false));
  m.class_means.assign(c, 0.0);

  // Merged counts across groups, for the pooled reference mean.
  std::vector<std::vector<std::int64_t>> merged(c, std::vector<std::int64_t>(c, 0));
  for (std::size_t gi = 0; gi < g; ++gi)
    for (std::size_t r = 0; r < c; ++r)
      for (std::size_t p = 0; p < c; ++p) merged[r][p] += confusions.counts[gi][r][p];

  std::string undefined_classes;
  for (std::size_t ci = 0; ci < c; ++ci) {
    std::size_t n_defined = 0;
    double sum = 0.0;
    for (std::size_t gi = 0; gi < g; ++gi) {
      const auto v = evaluate(kind, one_vs_all(confusions.counts[gi], ci));
      if (v) {
        m.values[ci][gi] = *v;
        m.defined[ci][gi] = true;
        ++n_defined;
        sum += *v;
      }
    }
    if (n_defined == 0) {
      if (!undefined_classes.empty()) undefined_classes += ", ";
      undefined_classes += "'" + confusions.schema.class_names[ci] + "'";
      continue;
    }
    if (mean_mode == MeanMode::UnweightedGroupMean) {
      m.class_means[ci] = sum / static_cast<double>(n_defined);
    } else {
      const auto pooled = evaluate(kind, one_vs_all(merged, ci));
      if (!pooled)
        throw InternalError("pooled mean undefined although a group cell is defined");
      m.class_means[ci] = *pooled;
    }
  }
  if (!undefined_classes.empty())
    throw InputError("metric " + std::string(metric_name(kind)) +
                     " is undefined in every group for class " + undefined_classes);
  return m;
}

double overall_accuracy(const GroupedConfusions& confusions) {
  confusions.validate();
  const std::int64_t total = confusions.total();
  if (total == 0) throw InputError("cannot compute accuracy of zero records");
  std::int64_t diag = 0;
  for (const auto& block : confusions.counts)
    for (std::size_t ci = 0; ci < block.size(); ++ci) diag += block[ci][ci];
  return static_cast<double>(diag) / static_cast<double>(total);
}

namespace {

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string disaggregated_table(const MetricMatrix& matrix, const DatasetSchema& schema) {
  if (matrix.num_classes() != schema.num_classes() ||
      matrix.num_groups() != schema.num_groups())
    throw InputError("metric matrix shape does not match the schema");
  std::ostringstream out;
  out << "class,group,value,defined,class_mean\n";
  for (std::size_t c = 0; c < matrix.num_classes(); ++c) {
    for (std::size_t g = 0; g < matrix.num_groups(); ++g) {
      out << schema.class_names[c] << ',' << schema.group_names[g] << ',';
      if (matrix.defined[c][g])
        out << format6(matrix.values[c][g]) << ",true,";
      else
        out << "NA,false,";
      out << format6(matrix.class_means[c]) << '\n';
    }
  }
  return out.str();
}

}  // namespace gfair
