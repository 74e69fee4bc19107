#include "gfair/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "gfair/errors.hpp"
#include "json.hpp"

namespace gfair {

namespace {

using json = nlohmann::json;

constexpr const char* kManifestFormat = "candidate-manifest/v1";
constexpr double kTieEps = 1e-12;

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Prints a percentage-point threshold the way labels are written: "5", not
// "5.000000"; "2.5" stays "2.5".
std::string format_pp(double pp) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", pp * 100.0);
  return buf;
}

const json& field(const json& run, const char* key, std::size_t index) {
  auto it = run.find(key);
  if (it == run.end())
    throw InputError("runs[" + std::to_string(index) + "]: missing field '" + key + "'");
  return *it;
}

double number_field(const json& run, const char* key, std::size_t index) {
  const json& v = field(run, key, index);
  if (!v.is_number())
    throw InputError("runs[" + std::to_string(index) + "]: '" + key +
                     "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    throw InputError("runs[" + std::to_string(index) + "]: '" + key + "' must be finite");
  return d;
}

double unit_field(const json& run, const char* key, std::size_t index) {
  const double d = number_field(run, key, index);
  if (d < 0.0 || d > 1.0)
    throw InputError("runs[" + std::to_string(index) + "]: '" + key +
                     "' must lie in [0,1] (got " + std::to_string(d) + ")");
  return d;
}

double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

// ===== manifest I/O =========================================================

std::vector<CandidateRun> parse_manifest(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("manifest must be a JSON object");
  const auto fmt = doc.find("format");
  if (fmt == doc.end() || !fmt->is_string() ||
      fmt->get<std::string>() != kManifestFormat)
    throw InputError(std::string("manifest must declare \"format\": \"") +
                     kManifestFormat + "\"");
  const auto runs_it = doc.find("runs");
  if (runs_it == doc.end() || !runs_it->is_array())
    throw InputError("manifest must carry a \"runs\" array");

  std::vector<CandidateRun> runs;
  runs.reserve(runs_it->size());
  std::size_t i = 0;
  for (const json& r : *runs_it) {
    if (!r.is_object())
      throw InputError("runs[" + std::to_string(i) + "] must be an object");
    CandidateRun run;
    const json& method = field(r, "method", i);
    const json& config = field(r, "config_id", i);
    if (!method.is_string() || method.get<std::string>().empty())
      throw InputError("runs[" + std::to_string(i) +
                       "]: 'method' must be a non-empty string");
    if (!config.is_string() || config.get<std::string>().empty())
      throw InputError("runs[" + std::to_string(i) +
                       "]: 'config_id' must be a non-empty string");
    run.method = method.get<std::string>();
    run.config_id = config.get<std::string>();
    const json& seed = field(r, "seed", i);
    if (!seed.is_number_integer())
      throw InputError("runs[" + std::to_string(i) + "]: 'seed' must be an integer");
    run.seed = seed.get<long long>();
    if (auto it = r.find("trade_off_param"); it != r.end() && !it->is_null())
      run.trade_off_param = number_field(r, "trade_off_param", i);
    run.dev.performance = unit_field(r, "dev_performance", i);
    run.dev.fairness = unit_field(r, "dev_fairness", i);
    run.test.performance = unit_field(r, "test_performance", i);
    run.test.fairness = unit_field(r, "test_fairness", i);
    if (auto it = r.find("dev_loss"); it != r.end() && !it->is_null())
      run.dev_loss = number_field(r, "dev_loss", i);
    runs.push_back(std::move(run));
    ++i;
  }
  return runs;
}

std::vector<ConfigSummary> group_by_config(std::span<const CandidateRun> runs) {
  std::map<std::pair<std::string, std::string>, std::vector<const CandidateRun*>> by_cfg;
  std::set<std::tuple<std::string, std::string, long long>> seen;
  for (const auto& run : runs) {
    if (!seen.insert({run.method, run.config_id, run.seed}).second)
      throw InputError("duplicate run: method '" + run.method + "', config '" +
                       run.config_id + "', seed " + std::to_string(run.seed));
    by_cfg[{run.method, run.config_id}].push_back(&run);
  }

  std::vector<ConfigSummary> out;
  out.reserve(by_cfg.size());
  for (const auto& [key, group] : by_cfg) {
    ConfigSummary s;
    s.method = key.first;
    s.config_id = key.second;
    s.n_seeds = static_cast<int>(group.size());

    const CandidateRun* first = group.front();
    std::vector<double> dp, df, tp, tf, losses;
    for (const CandidateRun* run : group) {
      if (run->trade_off_param.has_value() != first->trade_off_param.has_value() ||
          (run->trade_off_param && *run->trade_off_param != *first->trade_off_param))
        throw InputError("config '" + s.config_id + "' of method '" + s.method +
                         "' has a different trade_off_param across seeds");
      if (run->dev_loss.has_value() != first->dev_loss.has_value())
        throw InputError("config '" + s.config_id + "' of method '" + s.method +
                         "' has dev_loss on some seeds but not others");
      dp.push_back(run->dev.performance);
      df.push_back(run->dev.fairness);
      tp.push_back(run->test.performance);
      tf.push_back(run->test.fairness);
      if (run->dev_loss) losses.push_back(*run->dev_loss);
    }
    s.trade_off_param = first->trade_off_param;
    s.dev.performance = mean_of(dp);
    s.dev.fairness = mean_of(df);
    s.test.performance = mean_of(tp);
    s.test.fairness = mean_of(tf);
    s.dev_std = {sample_std(dp, s.dev.performance), sample_std(df, s.dev.fairness)};
    s.test_std = {sample_std(tp, s.test.performance), sample_std(tf, s.test.fairness)};
    if (!losses.empty()) s.dev_loss = mean_of(losses);
    out.push_back(std::move(s));
  }
  return out;  // std::map iteration is already (method, config_id) order
}

// ===== criteria =============================================================

std::string SelectionCriterion::label() const {
  switch (kind) {
    case Kind::MinDTO: return "dto";
    case Kind::MaxPerformance: return "p";
    case Kind::MaxFairness: return "f";
    case Kind::PerfAtFairnessGain: return "p@f+" + format_pp(pp) + "%";
    case Kind::FairnessAtPerfLoss: return "f@p-" + format_pp(pp) + "%";
    case Kind::MinLoss: return "min_loss";
  }
  throw InternalError("unhandled criterion kind");
}

SelectionCriterion criterion_from_label(std::string_view label) {
  SelectionCriterion c;
  if (label == "dto") {
    c.kind = SelectionCriterion::Kind::MinDTO;
    return c;
  }
  if (label == "p") {
    c.kind = SelectionCriterion::Kind::MaxPerformance;
    return c;
  }
  if (label == "f") {
    c.kind = SelectionCriterion::Kind::MaxFairness;
    return c;
  }
  if (label == "min_loss") {
    c.kind = SelectionCriterion::Kind::MinLoss;
    return c;
  }

  bool gain = label.starts_with("p@f+");
  bool loss = label.starts_with("f@p-");
  if ((gain || loss) && label.ends_with("%") && label.size() > 5) {
    const std::string num(label.substr(4, label.size() - 5));
    char* end = nullptr;
    const double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str() + num.size() && std::isfinite(v) && v > 0.0 && v < 100.0) {
      c.kind = gain ? SelectionCriterion::Kind::PerfAtFairnessGain
                    : SelectionCriterion::Kind::FairnessAtPerfLoss;
      c.pp = v / 100.0;
      return c;
    }
  }
  throw InputError("unknown selection criterion '" + std::string(label) +
                   "' (expected dto, p, f, min_loss, p@f+<pp>%, or f@p-<pp>%)");
}

// ===== selection ============================================================

SelectionResult select(std::span<const ConfigSummary> configs,
                       const SelectionCriterion& criterion) {
  if (configs.empty()) throw InputError("no configs to select from");
  for (const auto& cfg : configs)
    if (cfg.method != configs.front().method)
      throw InputError("select() takes the configs of a single method");
  if (criterion.constrained() && !criterion.baseline)
    throw InputError("criterion '" + criterion.label() + "' needs a baseline point");

  using Kind = SelectionCriterion::Kind;
  if (criterion.kind == Kind::MinLoss)
    for (const auto& cfg : configs)
      if (!cfg.dev_loss)
        throw InputError("criterion 'min_loss' needs dev_loss on every config, but '" +
                         cfg.config_id + "' of method '" + cfg.method + "' has none");

  // Feasibility, then a smaller-is-better objective on the dev point.
  const auto feasible = [&](const ConfigSummary& cfg) {
    switch (criterion.kind) {
      case Kind::PerfAtFairnessGain:
        return cfg.dev.fairness >= criterion.baseline->fairness + criterion.pp;
      case Kind::FairnessAtPerfLoss:
        return cfg.dev.performance >= criterion.baseline->performance - criterion.pp;
      default: return true;
    }
  };
  const auto objective = [&](const ConfigSummary& cfg) {
    switch (criterion.kind) {
      case Kind::MinDTO: return dto(cfg.dev, criterion.utopia);
      case Kind::MaxPerformance: return -cfg.dev.performance;
      case Kind::MaxFairness: return -cfg.dev.fairness;
      case Kind::PerfAtFairnessGain: return -cfg.dev.performance;
      case Kind::FairnessAtPerfLoss: return -cfg.dev.fairness;
      case Kind::MinLoss: return *cfg.dev_loss;
    }
    throw InternalError("unhandled criterion kind");
  };

  const ConfigSummary* best = nullptr;
  double best_obj = 0.0;
  for (const auto& cfg : configs) {
    if (!feasible(cfg)) continue;
    const double obj = objective(cfg);
    if (!best || obj < best_obj ||
        (obj == best_obj && (cfg.dev.fairness > best->dev.fairness ||
                             (cfg.dev.fairness == best->dev.fairness &&
                              cfg.config_id < best->config_id)))) {
      best = &cfg;
      best_obj = obj;
    }
  }
  if (!best) {
    std::string msg = "no feasible config for criterion '" + criterion.label() +
                      "' of method '" + std::string(configs.front().method) + "': ";
    if (criterion.kind == Kind::PerfAtFairnessGain)
      msg += "no dev fairness reaches " +
             format6(criterion.baseline->fairness + criterion.pp) + " (baseline " +
             format6(criterion.baseline->fairness) + " + " + format_pp(criterion.pp) +
             "pp)";
    else
      msg += "no dev performance stays above " +
             format6(criterion.baseline->performance - criterion.pp) + " (baseline " +
             format6(criterion.baseline->performance) + " - " + format_pp(criterion.pp) +
             "pp)";
    throw InfeasibleError(msg);
  }

  SelectionResult res;
  res.method = best->method;
  res.chosen_config = best->config_id;
  res.dev_point = best->dev;
  res.test_point = best->test;
  res.dev_std = best->dev_std;
  res.test_std = best->test_std;
  res.test_dto = dto(best->test, UtopiaPoint{});
  return res;
}

// ===== comparison ===========================================================

ComparisonTable compare_methods(std::span<const CandidateRun> manifest,
                                std::span<const SelectionCriterion> criteria,
                                CurveMode auc_mode,
                                std::optional<TradeoffPoint> baseline_override,
                                bool include_baseline) {
  const auto summaries = group_by_config(manifest);
  if (summaries.empty()) throw InputError("the manifest holds no runs");

  std::map<std::string, std::vector<ConfigSummary>> by_method;
  for (const auto& s : summaries) by_method[s.method].push_back(s);

  const bool needs_baseline =
      std::any_of(criteria.begin(), criteria.end(),
                  [](const auto& c) { return c.constrained(); });

  ComparisonTable table;
  table.auc_mode = auc_mode;
  for (const auto& c : criteria) table.criteria_labels.push_back(c.label());

  if (baseline_override) {
    table.baseline = *baseline_override;
  } else if (auto it = by_method.find("vanilla"); it != by_method.end()) {
    SelectionCriterion max_perf;
    max_perf.kind = SelectionCriterion::Kind::MaxPerformance;
    table.baseline = select(it->second, max_perf).dev_point;
  } else if (needs_baseline) {
    throw InputError(
        "constrained criteria need a baseline: add a 'vanilla' method to the "
        "manifest or pass one explicitly");
  }

  for (const auto& [method, configs] : by_method) {
    if (method == "vanilla" && !include_baseline) continue;
    MethodComparison row;
    row.method = method;
    for (const auto& crit : criteria) {
      SelectionCriterion bound = crit;
      if (bound.constrained()) bound.baseline = table.baseline;
      ComparisonCell cell;
      try {
        cell.result = select(configs, bound);
      } catch (const InfeasibleError& e) {
        cell.note = e.what();
      }
      row.cells.push_back(std::move(cell));
    }
    std::vector<TradeoffPoint> test_points;
    test_points.reserve(configs.size());
    for (const auto& cfg : configs) test_points.push_back(cfg.test);
    row.test_frontier = pareto_frontier(test_points);
    row.auc = auc_pfc(row.test_frontier, auc_mode);
    table.methods.push_back(std::move(row));
  }
  if (table.methods.empty())
    throw InputError("no methods to compare (only the baseline was given)");

  // Column winners: smallest test DTO per criterion, largest AUC; ties
  // within 1e-12 are all flagged.
  for (std::size_t ci = 0; ci < criteria.size(); ++ci) {
    double best_dto = std::numeric_limits<double>::infinity();
    for (const auto& m : table.methods)
      if (m.cells[ci].result)
        best_dto = std::min(best_dto, m.cells[ci].result->test_dto);
    int flagged = 0;
    for (auto& m : table.methods)
      if (m.cells[ci].result && m.cells[ci].result->test_dto <= best_dto + kTieEps) {
        m.cells[ci].best = true;
        ++flagged;
      }
    if (flagged > 1)
      for (auto& m : table.methods)
        if (m.cells[ci].best) m.cells[ci].tied = true;
  }
  double best_auc = -std::numeric_limits<double>::infinity();
  for (const auto& m : table.methods) best_auc = std::max(best_auc, m.auc);
  int auc_flagged = 0;
  for (auto& m : table.methods)
    if (m.auc >= best_auc - kTieEps) {
      m.auc_best = true;
      ++auc_flagged;
    }
  if (auc_flagged > 1)
    for (auto& m : table.methods)
      if (m.auc_best) m.auc_tied = true;

  return table;
}

// ===== renderings ===========================================================

std::string comparison_to_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "method,criterion,config,dev_performance,dev_fairness,test_performance,"
         "test_fairness,value,best,tied,note\n";
  const std::string auc_label =
      table.auc_mode == CurveMode::Step ? "auc_step" : "auc_linear";
  for (const auto& m : table.methods) {
    for (std::size_t ci = 0; ci < table.criteria_labels.size(); ++ci) {
      const auto& cell = m.cells[ci];
      out << csv_escape(m.method) << ',' << csv_escape(table.criteria_labels[ci]) << ',';
      if (cell.result) {
        const auto& r = *cell.result;
        out << csv_escape(r.chosen_config) << ',' << format6(r.dev_point.performance)
            << ',' << format6(r.dev_point.fairness) << ','
            << format6(r.test_point.performance) << ',' << format6(r.test_point.fairness)
            << ',' << format6(r.test_dto);
      } else {
        out << ",,,,,";
      }
      out << ',' << (cell.best ? 1 : 0) << ',' << (cell.tied ? 1 : 0) << ','
          << csv_escape(cell.note) << '\n';
    }
    out << csv_escape(m.method) << ',' << auc_label << ",,,,,," << format6(m.auc) << ','
        << (m.auc_best ? 1 : 0) << ',' << (m.auc_tied ? 1 : 0) << ",\n";
  }
  return out.str();
}

std::string comparison_to_text(const ComparisonTable& table) {
  const std::string auc_label =
      table.auc_mode == CurveMode::Step ? "auc_step" : "auc_linear";

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"method"};
  for (const auto& label : table.criteria_labels) header.push_back(label);
  header.push_back(auc_label);
  rows.push_back(std::move(header));

  for (const auto& m : table.methods) {
    std::vector<std::string> row{m.method};
    for (const auto& cell : m.cells) {
      if (!cell.result) {
        row.push_back("--");
        continue;
      }
      std::string s = cell.result->chosen_config + " " + format6(cell.result->test_dto);
      if (cell.best) s += cell.tied ? "=" : "*";
      row.push_back(std::move(s));
    }
    std::string a = format6(m.auc);
    if (m.auc_best) a += m.auc_tied ? "=" : "*";
    row.push_back(std::move(a));
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      widths[i] = std::max(widths[i], row[i].size());

  std::ostringstream out;
  out << "baseline: performance=" << format6(table.baseline.performance)
      << " fairness=" << format6(table.baseline.fairness) << "\n";
  out << "cells: chosen config, test distance-to-utopia; * column best, = tied; "
         "-- infeasible\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << "  ";
      out << row[i];
      if (i + 1 < row.size()) out << std::string(widths[i] - row[i].size(), ' ');
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace gfair
