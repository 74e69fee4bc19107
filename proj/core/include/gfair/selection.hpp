// The model-selection harness: sweep manifests of candidate runs, selection
// criteria applied to seed-averaged dev points, and the method-comparison
// table (test statistics, per-column best flags, and a selection-free AUC
// column per method).
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gfair/tradeoff.hpp"

namespace gfair {

// One swept run: a (method, config, seed) triple with its dev and test
// trade-off points. The manifest file is JSON:
//   { "format": "candidate-manifest/v1",
//     "runs": [ { "method": ..., "config_id": ..., "seed": ...,
//                 "trade_off_param": ...,            // optional
//                 "dev_performance": ..., "dev_fairness": ...,
//                 "test_performance": ..., "test_fairness": ...,
//                 "dev_loss": ... } ] }              // optional
struct CandidateRun {
  std::string method;
  std::string config_id;
  long long seed = 0;
  std::optional<double> trade_off_param;
  TradeoffPoint dev;
  TradeoffPoint test;
  std::optional<double> dev_loss;
};

std::vector<CandidateRun> parse_manifest(std::istream& in);

// Seed-averaged view of one (method, config_id): arithmetic means and
// sample standard deviations (n-1 denominator, 0 when n = 1) of both
// coordinates, dev and test separately.
struct ConfigSummary {
  std::string method;
  std::string config_id;
  std::optional<double> trade_off_param;
  int n_seeds = 0;
  TradeoffPoint dev;
  TradeoffPoint test;
  std::pair<double, double> dev_std{0.0, 0.0};   // (performance, fairness)
  std::pair<double, double> test_std{0.0, 0.0};
  std::optional<double> dev_loss;  // mean over seeds; set iff every run had it

  TradeoffPoint dev_point() const { return dev; }
};

// Sorted by (method, config_id). Errors on duplicate (method, config_id,
// seed) and on fields that disagree across seeds of one config.
std::vector<ConfigSummary> group_by_config(std::span<const CandidateRun> runs);

// Selection criteria. All thresholds are absolute percentage points on the
// [0,1] scales: PerfAtFairnessGain(x) restricts to configs with dev
// fairness >= baseline.fairness + x, FairnessAtPerfLoss(x) to configs with
// dev performance >= baseline.performance - x. MinLoss requires dev_loss.
struct SelectionCriterion {
  enum class Kind {
    MinDTO,
    MaxPerformance,
    MaxFairness,
    PerfAtFairnessGain,
    FairnessAtPerfLoss,
    MinLoss,
  };

  Kind kind = Kind::MinDTO;
  double pp = 0.0;             // threshold for the constrained kinds, in (0,1)
  UtopiaPoint utopia;          // MinDTO reference; default (1,1)
  std::optional<TradeoffPoint> baseline;  // required iff constrained

  // Compact label: "dto", "p", "f", "p@f+5%", "f@p-10%", "min_loss".
  std::string label() const;

  bool constrained() const {
    return kind == Kind::PerfAtFairnessGain || kind == Kind::FairnessAtPerfLoss;
  }
};

// Parses a label of the shape listed above; pp is read from the label.
SelectionCriterion criterion_from_label(std::string_view label);

struct SelectionResult {
  std::string method;
  std::string chosen_config;
  TradeoffPoint dev_point;
  TradeoffPoint test_point;
  std::pair<double, double> dev_std{0.0, 0.0};
  std::pair<double, double> test_std{0.0, 0.0};
  double test_dto = 0.0;  // always recomputed as dto(test_point, (1,1))
};

// Applies one criterion to one method's seed-averaged configs. Ties on the
// criterion value break toward higher dev fairness, then lexicographically
// smaller config_id. An empty feasible set raises InfeasibleError naming
// the violated threshold.
SelectionResult select(std::span<const ConfigSummary> configs,
                       const SelectionCriterion& criterion);

struct ComparisonCell {
  std::optional<SelectionResult> result;  // empty on infeasible selection
  std::string note;                       // infeasibility message when empty
  bool best = false;
  bool tied = false;
};

struct MethodComparison {
  std::string method;
  std::vector<ComparisonCell> cells;  // one per criterion, table order
  Frontier test_frontier;             // over seed-averaged test points
  double auc = 0.0;
  bool auc_best = false;
  bool auc_tied = false;
};

struct ComparisonTable {
  std::vector<std::string> criteria_labels;
  std::vector<MethodComparison> methods;  // sorted by method name
  CurveMode auc_mode = CurveMode::Step;
  TradeoffPoint baseline;  // the anchor used for constrained criteria
};

// Runs every criterion against every method. The method named "vanilla" is
// the baseline anchor (its highest-dev-performance config), feeds the
// constrained thresholds, and is excluded from the table rows unless
// include_baseline is set; an explicit baseline_override replaces it. Per
// criterion column the best cell is the one with the smallest test DTO
// (ties within 1e-12 are all flagged); the AUC column flags the largest.
ComparisonTable compare_methods(std::span<const CandidateRun> manifest,
                                std::span<const SelectionCriterion> criteria,
                                CurveMode auc_mode,
                                std::optional<TradeoffPoint> baseline_override = {},
                                bool include_baseline = false);

// Renderings: a delimited long-form table (one row per method x criterion,
// plus one AUC row per method) and an aligned text grid.
std::string comparison_to_csv(const ComparisonTable& table);
std::string comparison_to_text(const ComparisonTable& table);

}  // namespace gfair
