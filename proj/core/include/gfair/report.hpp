// Reporting: the five-item aggregation checklist (dataset statistics, base
// metric, basic unit, group aggregation, class aggregation — each with its
// motivation) and trade-off curve exports (CSV and a minimal static SVG).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfair/aggregation.hpp"
#include "gfair/schema.hpp"
#include "gfair/tradeoff.hpp"

namespace gfair {

// Free-text rationales supplied by the caller; empty strings are allowed
// but mark the report incomplete.
struct ChecklistMotivations {
  std::string metric;
  std::string unit;
  std::string group_aggregation;
  std::string class_aggregation;
};

struct ChecklistItem {
  std::string heading;
  std::string body;        // what was chosen, with its parameters
  std::string motivation;  // why; empty -> incomplete report
};

struct ChecklistReport {
  std::string dataset_stats;  // joint class x group count/percentage table
  ChecklistItem metric;
  ChecklistItem unit;
  ChecklistItem group_aggregation;
  ChecklistItem class_aggregation;
  bool complete = false;

  std::string to_text() const;
};

// Builds the checklist from per-group confusions (the joint distribution of
// true class and group is read off the row sums). When records are given,
// per-split partition sizes are included too.
ChecklistReport checklist_report(const GroupedConfusions& confusions,
                                 BaseMetricKind kind, const AggregationSpec& spec,
                                 const ChecklistMotivations& motivations);
ChecklistReport checklist_report(const std::vector<PredictionRecord>& records,
                                 const DatasetSchema& schema, BaseMetricKind kind,
                                 const AggregationSpec& spec,
                                 const ChecklistMotivations& motivations);

enum class CurveFormat { Delimited, SVG };

// Delimited: performance,fairness rows in frontier order, written with
// shortest-round-trip precision so re-parsing reproduces the exact values.
// SVG: static scatter + curve with the utopia marker at (1,1).
std::string export_curve(const Frontier& frontier, CurveFormat format,
                         CurveMode mode = CurveMode::Step);

// Reads points from delimited text with a performance,fairness header
// (blank lines and '#' comments ignored).
std::vector<TradeoffPoint> parse_points(std::istream& in);

}  // namespace gfair
