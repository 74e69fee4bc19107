// gfair: fairness aggregation, trade-off geometry, and model selection from
// the command line. Subcommands: metrics, aggregate, frontier, dto, auc,
// select, compare, report, fixture. Exit codes: 0 success, 2 input error,
// 3 infeasible selection, 4 internal invariant violation.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "gfair/aggregation.hpp"
#include "gfair/dataset_io.hpp"
#include "gfair/errors.hpp"
#include "gfair/fixture.hpp"
#include "gfair/group_metrics.hpp"
#include "gfair/report.hpp"
#include "gfair/selection.hpp"
#include "gfair/tradeoff.hpp"

namespace {

using gfair::InputError;
using ordered_json = nlohmann::ordered_json;

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Fraction flags accept both 0.82 and 82% (the suffix divides by 100).
double parse_fraction(const std::string& text, const std::string& flag) {
  std::string s = text;
  double scale = 1.0;
  if (!s.empty() && s.back() == '%') {
    s.pop_back();
    scale = 0.01;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw InputError(flag + ": '" + text + "' is not a number");
  return v * scale;
}

double parse_exponent(const std::string& text, const std::string& flag) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);  // accepts inf / -inf
  if (text.empty() || end != text.c_str() + text.size() || std::isnan(v))
    throw InputError(flag + ": '" + text + "' is not an exponent");
  return v;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : split_list(text, ',')) out.push_back(parse_fraction(item, flag));
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

// Effective-configuration echo: every output is self-describing.
struct Echo {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) {
    entries.emplace_back(std::move(key), std::move(value));
  }
  void add(std::string key, double value) { add(std::move(key), format6(value)); }

  std::string comments() const {
    std::string out;
    for (const auto& [k, v] : entries) out += "# " + k + ": " + v + "\n";
    return out;
  }
  ordered_json json() const {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : entries) obj[k] = v;
    return obj;
  }
};

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write '" + out_path + "'");
  out << text;
}

// ===== schema & dataset loading =============================================

struct SchemaOpts {
  std::string classes;
  std::string groups;
  std::string positive_class;
  bool infer = false;

  void setup(CLI::App* cmd) {
    cmd->add_option("--classes", classes, "comma-separated class names, in order");
    cmd->add_option("--groups", groups, "comma-separated group names, in order");
    cmd->add_option("--positive-class", positive_class, "class name treated as positive");
    cmd->add_flag("--infer-schema", infer,
                  "derive classes/groups from the records file (sorted by name)");
  }

  bool given() const { return infer || !classes.empty() || !groups.empty(); }

  gfair::DatasetSchema from_flags() const {
    if (classes.empty() || groups.empty())
      throw InputError("give --classes and --groups, or --infer-schema");
    gfair::DatasetSchema schema;
    schema.class_names = split_list(classes, ',');
    schema.group_names = split_list(groups, ',');
    if (!positive_class.empty()) {
      const auto idx = schema.class_index(positive_class);
      if (!idx) throw InputError("--positive-class '" + positive_class + "' is not a class");
      schema.positive_class = idx;
    }
    schema.validate();
    return schema;
  }
};

// First pass over a records file: collect the names appearing in the y,
// y_hat, and z columns. Sorted so the schema does not depend on row order.
gfair::DatasetSchema infer_schema(const std::string& path,
                                  const std::string& positive_class) {
  auto in = open_input(path);
  std::string line;
  int col_y = -1, col_yhat = -1, col_z = -1;
  std::set<std::string> classes, groups;
  bool header_seen = false;
  while (std::getline(in, line)) {
    std::string_view sv = line;
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
    while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
    if (sv.empty() || sv.front() == '#') continue;
    std::vector<std::string> fields;
    for (const auto& f : split_list(std::string(sv), ',')) {
      std::string t = f;
      while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
      while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r'))
        t.pop_back();
      fields.push_back(t);
    }
    if (!header_seen) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "y") col_y = static_cast<int>(i);
        if (fields[i] == "y_hat") col_yhat = static_cast<int>(i);
        if (fields[i] == "z") col_z = static_cast<int>(i);
      }
      if (col_y < 0 || col_yhat < 0 || col_z < 0)
        throw InputError("cannot infer a schema: '" + path +
                         "' has no y/y_hat/z header columns");
      header_seen = true;
      continue;
    }
    const auto at = [&](int col) -> std::string {
      return col >= 0 && static_cast<std::size_t>(col) < fields.size()
                 ? fields[static_cast<std::size_t>(col)]
                 : std::string();
    };
    if (!at(col_y).empty()) classes.insert(at(col_y));
    if (!at(col_yhat).empty()) classes.insert(at(col_yhat));
    if (!at(col_z).empty()) groups.insert(at(col_z));
  }
  gfair::DatasetSchema schema;
  schema.class_names.assign(classes.begin(), classes.end());
  schema.group_names.assign(groups.begin(), groups.end());
  if (!positive_class.empty()) {
    const auto idx = schema.class_index(positive_class);
    if (!idx) throw InputError("--positive-class '" + positive_class + "' is not a class");
    schema.positive_class = idx;
  }
  schema.validate();
  return schema;
}

struct DatasetOpts {
  std::string records_path;
  std::string confusions_path;
  std::string split = "all";
  SchemaOpts schema_opts;

  void setup(CLI::App* cmd) {
    cmd->add_option("--records", records_path, "prediction records CSV");
    cmd->add_option("--confusions", confusions_path, "grouped-confusions JSON");
    cmd->add_option("--split", split, "records filter: train, dev, test, or all")
        ->default_val("all");
    schema_opts.setup(cmd);
  }

  gfair::GroupedConfusions load(Echo& echo) const {
    if (records_path.empty() == confusions_path.empty())
      throw InputError("give exactly one of --records or --confusions");

    if (!confusions_path.empty()) {
      if (schema_opts.given())
        throw InputError("--confusions files carry their own schema; drop the schema flags");
      echo.add("input", confusions_path);
      auto in = open_input(confusions_path);
      return gfair::parse_confusions(in);
    }

    const gfair::DatasetSchema schema =
        schema_opts.infer ? infer_schema(records_path, schema_opts.positive_class)
                          : schema_opts.from_flags();
    echo.add("input", records_path);
    echo.add("split", split);
    auto in = open_input(records_path);
    auto records = gfair::parse_records(in, schema);
    if (split != "all") {
      const auto want = gfair::split_from_name(split);
      if (!want) throw InputError("--split: '" + split + "' is not train/dev/test/all");
      std::erase_if(records, [&](const auto& r) { return r.split != *want; });
    }
    auto confusions = gfair::confusions_from_records(records, schema);
    std::string cls, grp;
    for (const auto& n : schema.class_names) cls += (cls.empty() ? "" : ",") + n;
    for (const auto& n : schema.group_names) grp += (grp.empty() ? "" : ",") + n;
    echo.add("classes", cls);
    echo.add("groups", grp);
    return confusions;
  }
};

// ===== aggregation-spec flags ===============================================

struct SpecOpts {
  std::string preset;
  std::string gamma;
  std::string unit = "gap";
  std::string group_form = "power_mean";
  std::string group_p = "1";
  std::string group_weights;
  std::string class_method = "mean";
  std::size_t binary_class = 1;
  std::string class_p = "1";
  std::string direction;

  CLI::App* cmd = nullptr;

  void setup(CLI::App* c) {
    cmd = c;
    cmd->add_option("--preset", preset, "named preset; other spec flags override it");
    cmd->add_option("--gamma", gamma, "slack for the threshold units (accepts %)");
    cmd->add_option("--unit", unit, "score, gap, ratio, gap_threshold, ratio_threshold");
    cmd->add_option("--group-form", group_form,
                    "power_mean, sum, variance, span_difference, span_ratio");
    cmd->add_option("--group-p", group_p, "group exponent (number, inf, -inf; not 0)");
    cmd->add_option("--group-weights", group_weights,
                    "comma-separated non-negative weights summing to 1");
    cmd->add_option("--class-method", class_method,
                    "mean, quadratic_mean, binary, generalized_mean");
    cmd->add_option("--binary-class", binary_class, "class index for --class-method binary");
    cmd->add_option("--class-p", class_p, "class exponent for generalized_mean");
    cmd->add_option("--direction", direction,
                    "smaller_fairer, larger_fairer, ratio_around_one");
  }

  gfair::AggregationSpec build(Echo& echo) const {
    std::optional<double> gamma_value;
    if (cmd->count("--gamma")) gamma_value = parse_fraction(gamma, "--gamma");

    gfair::AggregationSpec spec;
    if (!preset.empty()) spec = gfair::preset(preset, gamma_value);

    const auto have = [&](const char* flag) { return cmd->count(flag) > 0; };
    if (preset.empty() || have("--unit")) {
      const auto kind = gfair::unit_kind_from_name(unit);
      if (!kind) throw InputError("--unit: unknown unit '" + unit + "'");
      spec.unit.kind = *kind;
      spec.unit.gamma = gamma_value.value_or(0.0);
    }
    if (have("--group-form")) {
      if (group_form == "power_mean") spec.group_form = gfair::GroupForm::PowerMean;
      else if (group_form == "sum") spec.group_form = gfair::GroupForm::Sum;
      else if (group_form == "variance") spec.group_form = gfair::GroupForm::Variance;
      else if (group_form == "span_difference")
        spec.group_form = gfair::GroupForm::SpanDifference;
      else if (group_form == "span_ratio") spec.group_form = gfair::GroupForm::SpanRatio;
      else throw InputError("--group-form: unknown form '" + group_form + "'");
    }
    if (have("--group-p")) spec.group_p = parse_exponent(group_p, "--group-p");
    if (have("--group-weights"))
      spec.group_weights = parse_number_list(group_weights, "--group-weights");
    if (have("--class-method")) {
      if (class_method == "mean") spec.class_method.method = gfair::ClassMethod::Mean;
      else if (class_method == "quadratic_mean")
        spec.class_method.method = gfair::ClassMethod::QuadraticMean;
      else if (class_method == "binary")
        spec.class_method.method = gfair::ClassMethod::Binary;
      else if (class_method == "generalized_mean")
        spec.class_method.method = gfair::ClassMethod::GeneralizedMean;
      else throw InputError("--class-method: unknown method '" + class_method + "'");
    }
    if (have("--binary-class")) spec.class_method.binary_class = binary_class;
    if (have("--class-p")) spec.class_method.p = parse_exponent(class_p, "--class-p");
    if (have("--direction")) {
      const auto dir = gfair::direction_from_name(direction);
      if (!dir) throw InputError("--direction: unknown direction '" + direction + "'");
      spec.direction = *dir;
    } else if (preset.empty()) {
      // Infer the admissible direction for hand-built specs.
      switch (spec.unit.kind) {
        case gfair::UnitKind::Score:
          spec.direction = spec.group_form == gfair::GroupForm::SpanDifference
                               ? gfair::Direction::SmallerFairer
                           : spec.group_form == gfair::GroupForm::SpanRatio
                               ? gfair::Direction::RatioAroundOne
                               : gfair::Direction::LargerFairer;
          break;
        case gfair::UnitKind::Gap: spec.direction = gfair::Direction::SmallerFairer; break;
        case gfair::UnitKind::Ratio:
          spec.direction = gfair::Direction::LargerFairer;
          break;
        case gfair::UnitKind::GapThreshold:
        case gfair::UnitKind::RatioThreshold:
          spec.direction = gfair::Direction::LargerFairer;
          break;
      }
    }
    spec.validate();

    if (!spec.preset_name.empty()) echo.add("preset", spec.preset_name);
    echo.add("unit", std::string(gfair::unit_kind_name(spec.unit.kind)));
    if (spec.unit.gamma != 0.0) echo.add("gamma", spec.unit.gamma);
    switch (spec.group_form) {
      case gfair::GroupForm::PowerMean: {
        std::ostringstream p;
        p << spec.group_p;
        echo.add("group_form", "power_mean");
        echo.add("group_p", p.str());
        break;
      }
      case gfair::GroupForm::Sum: echo.add("group_form", "sum"); break;
      case gfair::GroupForm::Variance: echo.add("group_form", "variance"); break;
      case gfair::GroupForm::SpanDifference:
        echo.add("group_form", "span_difference");
        break;
      case gfair::GroupForm::SpanRatio: echo.add("group_form", "span_ratio"); break;
    }
    if (spec.group_weights) {
      std::string w;
      for (double x : *spec.group_weights) {
        if (!w.empty()) w += ",";
        w += format6(x);
      }
      echo.add("group_weights", w);
    }
    switch (spec.class_method.method) {
      case gfair::ClassMethod::Mean: echo.add("class_method", "mean"); break;
      case gfair::ClassMethod::QuadraticMean:
        echo.add("class_method", "quadratic_mean");
        break;
      case gfair::ClassMethod::Binary:
        echo.add("class_method", "binary");
        echo.add("binary_class", std::to_string(spec.class_method.binary_class));
        break;
      case gfair::ClassMethod::GeneralizedMean: {
        std::ostringstream p;
        p << spec.class_method.p;
        echo.add("class_method", "generalized_mean");
        echo.add("class_p", p.str());
        break;
      }
    }
    echo.add("direction", std::string(gfair::direction_name(spec.direction)));
    return spec;
  }
};

gfair::BaseMetricKind parse_metric(const std::string& name) {
  const auto kind = gfair::metric_from_name(name);
  if (!kind) throw InputError("--metric: unknown metric '" + name + "'");
  return *kind;
}

gfair::MeanMode parse_mean_mode(const std::string& name) {
  const auto mode = gfair::mean_mode_from_name(name);
  if (!mode) throw InputError("--mean-mode: '" + name + "' is not pooled/group_mean");
  return *mode;
}

gfair::CurveMode parse_curve_mode(const std::string& name) {
  if (name == "step") return gfair::CurveMode::Step;
  if (name == "linear") return gfair::CurveMode::Linear;
  throw InputError("--mode: '" + name + "' is not step/linear");
}

// ===== subcommands ==========================================================

struct MetricsCmd {
  DatasetOpts dataset;
  std::string metric = "tpr";
  std::string mean_mode = "pooled";
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "metrics", "disaggregated per-class, per-group metric table (CSV)");
    dataset.setup(cmd);
    cmd->add_option("--metric", metric, "tpr, tnr, fpr, ppr, precision, accuracy, f1")
        ->default_val("tpr");
    cmd->add_option("--mean-mode", mean_mode, "pooled or group_mean")
        ->default_val("pooled");
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "metrics");
    const auto confusions = dataset.load(echo);
    echo.add("metric", metric);
    echo.add("mean_mode", mean_mode);
    const auto matrix = gfair::metric_matrix(confusions, parse_metric(metric),
                                             parse_mean_mode(mean_mode));
    write_output(echo.comments() + gfair::disaggregated_table(matrix, confusions.schema),
                 out);
  }
};

struct AggregateCmd {
  DatasetOpts dataset;
  SpecOpts spec_opts;
  std::string metric = "tpr";
  std::string mean_mode = "pooled";
  bool as_json = false;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "aggregate", "two-step fairness aggregation of a metric matrix");
    dataset.setup(cmd);
    spec_opts.setup(cmd);
    cmd->add_option("--metric", metric, "tpr, tnr, fpr, ppr, precision, accuracy, f1")
        ->default_val("tpr");
    cmd->add_option("--mean-mode", mean_mode, "pooled or group_mean")
        ->default_val("pooled");
    cmd->add_flag("--json", as_json, "emit JSON instead of text");
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "aggregate");
    const auto confusions = dataset.load(echo);
    echo.add("metric", metric);
    echo.add("mean_mode", mean_mode);
    const auto spec = spec_opts.build(echo);
    const auto matrix = gfair::metric_matrix(confusions, parse_metric(metric),
                                             parse_mean_mode(mean_mode));
    const auto outcome = gfair::aggregate(matrix, spec);
    const double accuracy = gfair::overall_accuracy(confusions);

    if (as_json) {
      ordered_json doc;
      doc["config"] = echo.json();
      doc["betas"] = outcome.betas;
      doc["delta"] = outcome.delta;
      doc["fairness"] = outcome.fairness;
      doc["clamped"] = outcome.clamped;
      doc["performance"] = accuracy;
      write_output(doc.dump(2) + "\n", out);
      return;
    }
    std::string text = echo.comments();
    for (std::size_t c = 0; c < outcome.betas.size(); ++c)
      text += "beta[" + confusions.schema.class_names[c] +
              "]: " + format6(outcome.betas[c]) + "\n";
    text += "delta: " + format6(outcome.delta) + "\n";
    text += "fairness: " + format6(outcome.fairness) + "\n";
    text += std::string("clamped: ") + (outcome.clamped ? "yes" : "no") + "\n";
    text += "performance: " + format6(accuracy) + " (overall accuracy)\n";
    write_output(text, out);
  }
};

struct FrontierCmd {
  std::string points_path;
  std::string format = "csv";
  std::string mode = "step";
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "frontier", "Pareto frontier of a performance,fairness point list");
    cmd->add_option("--points", points_path, "CSV with performance,fairness columns")
        ->required();
    cmd->add_option("--format", format, "csv or svg")->default_val("csv");
    cmd->add_option("--mode", mode, "curve shape for svg: step or linear")
        ->default_val("step");
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "frontier");
    echo.add("input", points_path);
    echo.add("format", format);
    auto in = open_input(points_path);
    const auto points = gfair::parse_points(in);
    const auto frontier = gfair::pareto_frontier(points);
    if (format == "csv") {
      write_output(echo.comments() +
                       gfair::export_curve(frontier, gfair::CurveFormat::Delimited),
                   out);
    } else if (format == "svg") {
      write_output(gfair::export_curve(frontier, gfair::CurveFormat::SVG,
                                       parse_curve_mode(mode)),
                   out);
    } else {
      throw InputError("--format: '" + format + "' is not csv/svg");
    }
  }
};

struct UtopiaOpts {
  std::string performance = "1";
  std::string fairness = "1";
  std::string w_performance = "1";
  std::string w_fairness = "1";

  void setup(CLI::App* cmd) {
    cmd->add_option("--utopia-performance", performance, "utopia performance (accepts %)")
        ->default_val("1");
    cmd->add_option("--utopia-fairness", fairness, "utopia fairness (accepts %)")
        ->default_val("1");
    cmd->add_option("--w-performance", w_performance, "performance axis weight")
        ->default_val("1");
    cmd->add_option("--w-fairness", w_fairness, "fairness axis weight")->default_val("1");
  }

  gfair::UtopiaPoint build(Echo& echo) const {
    gfair::UtopiaPoint u;
    u.performance = parse_fraction(performance, "--utopia-performance");
    u.fairness = parse_fraction(fairness, "--utopia-fairness");
    u.w_performance = parse_fraction(w_performance, "--w-performance");
    u.w_fairness = parse_fraction(w_fairness, "--w-fairness");
    echo.add("utopia", format6(u.performance) + "," + format6(u.fairness));
    echo.add("weights", format6(u.w_performance) + "," + format6(u.w_fairness));
    return u;
  }
};

struct DtoCmd {
  std::string performance;
  std::string fairness;
  UtopiaOpts utopia;
  bool as_json = false;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("dto", "distance to the utopia point");
    cmd->add_option("--performance", performance, "performance in [0,1] (accepts %)")
        ->required();
    cmd->add_option("--fairness", fairness, "fairness in [0,1] (accepts %)")->required();
    utopia.setup(cmd);
    cmd->add_flag("--json", as_json, "emit JSON instead of text");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "dto");
    gfair::TradeoffPoint p;
    p.performance = parse_fraction(performance, "--performance");
    p.fairness = parse_fraction(fairness, "--fairness");
    echo.add("point", format6(p.performance) + "," + format6(p.fairness));
    const auto u = utopia.build(echo);
    const double d = gfair::dto(p, u);
    if (as_json) {
      ordered_json doc;
      doc["config"] = echo.json();
      doc["dto"] = d;
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << echo.comments() << format6(d) << "\n";
    }
  }
};

struct AucCmd {
  std::string points_path;
  std::string mode = "step";
  std::string min_performance;
  std::string min_fairness;
  std::string max_dto;
  UtopiaOpts utopia;
  int resolution = 10000;
  bool as_json = false;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "auc", "area under the performance-fairness trade-off curve");
    cmd->add_option("--points", points_path, "CSV with performance,fairness columns")
        ->required();
    cmd->add_option("--mode", mode, "step or linear")->default_val("step");
    cmd->add_option("--min-performance", min_performance,
                    "restrict to performance >= threshold (accepts %)");
    cmd->add_option("--min-fairness", min_fairness,
                    "restrict to fairness >= threshold (accepts %)");
    cmd->add_option("--max-dto", max_dto, "restrict to DTO <= threshold");
    utopia.setup(cmd);
    cmd->add_option("--resolution", resolution, "angles for the max-dto quadrature")
        ->default_val(10000);
    cmd->add_flag("--json", as_json, "emit JSON instead of text");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "auc");
    echo.add("input", points_path);
    echo.add("mode", mode);
    auto in = open_input(points_path);
    const auto points = gfair::parse_points(in);
    const auto frontier = gfair::pareto_frontier(points);
    const auto curve_mode = parse_curve_mode(mode);

    int constraints = 0;
    for (const auto* s : {&min_performance, &min_fairness, &max_dto})
      if (!s->empty()) ++constraints;
    if (constraints > 1)
      throw InputError("give at most one of --min-performance/--min-fairness/--max-dto");

    double value = 0.0;
    if (!min_performance.empty()) {
      gfair::MinPerformance c{parse_fraction(min_performance, "--min-performance")};
      echo.add("min_performance", c.threshold);
      value = gfair::partial_auc_pfc(frontier, c, curve_mode, resolution);
    } else if (!min_fairness.empty()) {
      gfair::MinFairness c{parse_fraction(min_fairness, "--min-fairness")};
      echo.add("min_fairness", c.threshold);
      value = gfair::partial_auc_pfc(frontier, c, curve_mode, resolution);
    } else if (!max_dto.empty()) {
      gfair::MaxDTO c;
      c.threshold = parse_fraction(max_dto, "--max-dto");
      c.utopia = utopia.build(echo);
      echo.add("max_dto", c.threshold);
      echo.add("resolution", std::to_string(resolution));
      value = gfair::partial_auc_pfc(frontier, c, curve_mode, resolution);
    } else {
      value = gfair::auc_pfc(frontier, curve_mode);
    }

    if (as_json) {
      ordered_json doc;
      doc["config"] = echo.json();
      doc["auc"] = value;
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << echo.comments() << format6(value) << "\n";
    }
  }
};

struct SelectCmd {
  std::string manifest_path;
  std::string method;
  std::string criterion = "dto";
  std::string baseline_performance;
  std::string baseline_fairness;
  UtopiaOpts utopia;
  bool as_json = false;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "select", "pick one config of a method by a selection criterion");
    cmd->add_option("--manifest", manifest_path, "candidate-manifest JSON")->required();
    cmd->add_option("--method", method, "method whose configs are searched")->required();
    cmd->add_option("--criterion", criterion,
                    "dto, p, f, min_loss, p@f+<pp>%, f@p-<pp>%")
        ->default_val("dto");
    cmd->add_option("--baseline-performance", baseline_performance,
                    "baseline performance for constrained criteria (accepts %)");
    cmd->add_option("--baseline-fairness", baseline_fairness,
                    "baseline fairness for constrained criteria (accepts %)");
    utopia.setup(cmd);
    cmd->add_flag("--json", as_json, "emit JSON instead of text");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "select");
    echo.add("input", manifest_path);
    echo.add("method", method);
    echo.add("criterion", criterion);
    auto in = open_input(manifest_path);
    const auto runs = gfair::parse_manifest(in);
    const auto summaries = gfair::group_by_config(runs);
    std::vector<gfair::ConfigSummary> mine;
    for (const auto& s : summaries)
      if (s.method == method) mine.push_back(s);
    if (mine.empty())
      throw InputError("the manifest has no runs of method '" + method + "'");

    auto crit = gfair::criterion_from_label(criterion);
    crit.utopia = utopia.build(echo);
    if (crit.constrained()) {
      if (baseline_performance.empty() || baseline_fairness.empty())
        throw InputError("criterion '" + criterion +
                         "' needs --baseline-performance and --baseline-fairness");
      gfair::TradeoffPoint baseline;
      baseline.performance = parse_fraction(baseline_performance, "--baseline-performance");
      baseline.fairness = parse_fraction(baseline_fairness, "--baseline-fairness");
      crit.baseline = baseline;
      echo.add("baseline",
               format6(baseline.performance) + "," + format6(baseline.fairness));
    }

    const auto res = gfair::select(mine, crit);
    if (as_json) {
      ordered_json doc;
      doc["config"] = echo.json();
      doc["method"] = res.method;
      doc["chosen_config"] = res.chosen_config;
      doc["dev"] = {{"performance", res.dev_point.performance},
                    {"fairness", res.dev_point.fairness},
                    {"performance_std", res.dev_std.first},
                    {"fairness_std", res.dev_std.second}};
      doc["test"] = {{"performance", res.test_point.performance},
                     {"fairness", res.test_point.fairness},
                     {"performance_std", res.test_std.first},
                     {"fairness_std", res.test_std.second}};
      doc["test_dto"] = res.test_dto;
      std::cout << doc.dump(2) << "\n";
      return;
    }
    std::string text = echo.comments();
    text += "chosen_config: " + res.chosen_config + "\n";
    text += "dev: performance=" + format6(res.dev_point.performance) +
            " fairness=" + format6(res.dev_point.fairness) + " (std " +
            format6(res.dev_std.first) + "/" + format6(res.dev_std.second) + ")\n";
    text += "test: performance=" + format6(res.test_point.performance) +
            " fairness=" + format6(res.test_point.fairness) + " (std " +
            format6(res.test_std.first) + "/" + format6(res.test_std.second) + ")\n";
    text += "test_dto: " + format6(res.test_dto) + "\n";
    std::cout << text;
  }
};

struct CompareCmd {
  std::string manifest_path;
  std::string criteria = "dto,p,p@f+5%,p@f+10%,f,f@p-5%,f@p-10%";
  std::string auc_mode = "step";
  std::string baseline_performance;
  std::string baseline_fairness;
  bool include_baseline = false;
  std::string format = "text";
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "compare", "method-by-criterion comparison table over a manifest");
    cmd->add_option("--manifest", manifest_path, "candidate-manifest JSON")->required();
    cmd->add_option("--criteria", criteria, "comma-separated criterion labels")
        ->default_val("dto,p,p@f+5%,p@f+10%,f,f@p-5%,f@p-10%");
    cmd->add_option("--auc-mode", auc_mode, "step or linear")->default_val("step");
    cmd->add_option("--baseline-performance", baseline_performance,
                    "override the vanilla-derived baseline (accepts %)");
    cmd->add_option("--baseline-fairness", baseline_fairness,
                    "override the vanilla-derived baseline (accepts %)");
    cmd->add_flag("--include-baseline", include_baseline,
                  "keep the vanilla method as a table row");
    cmd->add_option("--format", format, "text or csv")->default_val("text");
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "compare");
    echo.add("input", manifest_path);
    echo.add("criteria", criteria);
    echo.add("auc_mode", auc_mode);
    auto in = open_input(manifest_path);
    const auto runs = gfair::parse_manifest(in);

    std::vector<gfair::SelectionCriterion> crits;
    for (const auto& label : split_list(criteria, ','))
      crits.push_back(gfair::criterion_from_label(label));

    std::optional<gfair::TradeoffPoint> override_baseline;
    if (baseline_performance.empty() != baseline_fairness.empty())
      throw InputError(
          "give both --baseline-performance and --baseline-fairness, or neither");
    if (!baseline_performance.empty()) {
      gfair::TradeoffPoint b;
      b.performance = parse_fraction(baseline_performance, "--baseline-performance");
      b.fairness = parse_fraction(baseline_fairness, "--baseline-fairness");
      override_baseline = b;
      echo.add("baseline", format6(b.performance) + "," + format6(b.fairness));
    }

    const auto table =
        gfair::compare_methods(runs, crits, parse_curve_mode(auc_mode),
                               override_baseline, include_baseline);
    if (format == "csv") {
      write_output(echo.comments() + gfair::comparison_to_csv(table), out);
    } else if (format == "text") {
      write_output(echo.comments() + gfair::comparison_to_text(table), out);
    } else {
      throw InputError("--format: '" + format + "' is not text/csv");
    }
  }
};

struct ReportCmd {
  DatasetOpts dataset;
  SpecOpts spec_opts;
  std::string metric = "tpr";
  std::string mean_mode = "pooled";
  std::string why_metric, why_unit, why_group, why_class;
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "report", "aggregation checklist: dataset statistics plus the four "
                  "documented choices");
    dataset.setup(cmd);
    spec_opts.setup(cmd);
    cmd->add_option("--metric", metric, "tpr, tnr, fpr, ppr, precision, accuracy, f1")
        ->default_val("tpr");
    cmd->add_option("--mean-mode", mean_mode, "pooled or group_mean")
        ->default_val("pooled");
    cmd->add_option("--why-metric", why_metric, "motivation for the base metric");
    cmd->add_option("--why-unit", why_unit, "motivation for the basic unit");
    cmd->add_option("--why-group", why_group, "motivation for the group aggregation");
    cmd->add_option("--why-class", why_class, "motivation for the class aggregation");
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "report");
    const auto confusions = dataset.load(echo);
    echo.add("metric", metric);
    echo.add("mean_mode", mean_mode);
    auto spec = spec_opts.build(echo);
    spec.mean_mode = parse_mean_mode(mean_mode);  // echoed in the checklist
    gfair::ChecklistMotivations why;
    why.metric = why_metric;
    why.unit = why_unit;
    why.group_aggregation = why_group;
    why.class_aggregation = why_class;
    const auto rep =
        gfair::checklist_report(confusions, parse_metric(metric), spec, why);
    write_output(echo.comments() + rep.to_text(), out);
  }
};

struct FixtureCmd {
  SchemaOpts schema_opts;
  std::string n_per_cell;
  long long n_uniform = 0;
  std::string tpr;
  double spread = 1.0;
  unsigned long long seed = 0;
  std::string split = "test";
  std::string out;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "fixture", "generate a synthetic prediction-records CSV");
    schema_opts.setup(cmd);
    cmd->add_option("--n-per-cell", n_per_cell,
                    "class-by-group record counts, rows ';'-separated, e.g. "
                    "\"100,200;300,400\"");
    cmd->add_option("--n", n_uniform, "uniform record count for every cell");
    cmd->add_option("--tpr", tpr,
                    "class-by-group TPR targets in (0,1], same shape as --n-per-cell")
        ->required();
    cmd->add_option("--spread", spread,
                    "miss-mass distribution: 1 uniform over wrong classes, 0 all on "
                    "the next class")
        ->default_val(1.0);
    cmd->add_option("--seed", seed, "RNG seed")->default_val(0);
    cmd->add_option("--split", split, "train, dev, or test")->default_val("test");
    cmd->add_option("--out", out, "output file (default stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    Echo echo;
    echo.add("command", "fixture");
    gfair::FixtureSpec spec;
    spec.schema = schema_opts.from_flags();
    const std::size_t nc = spec.schema.num_classes();
    const std::size_t ng = spec.schema.num_groups();

    if (n_per_cell.empty() == (n_uniform == 0))
      throw InputError("give exactly one of --n-per-cell or --n");
    if (!n_per_cell.empty()) {
      for (const auto& row : split_list(n_per_cell, ';')) {
        std::vector<std::int64_t> cells;
        for (const auto& item : split_list(row, ',')) {
          char* end = nullptr;
          const long long v = std::strtoll(item.c_str(), &end, 10);
          if (item.empty() || end != item.c_str() + item.size())
            throw InputError("--n-per-cell: '" + item + "' is not an integer");
          cells.push_back(v);
        }
        spec.n_per_cell.push_back(std::move(cells));
      }
    } else {
      spec.n_per_cell.assign(nc, std::vector<std::int64_t>(ng, n_uniform));
    }

    for (const auto& row : split_list(tpr, ';')) {
      std::vector<double> cells;
      for (const auto& item : split_list(row, ','))
        cells.push_back(parse_fraction(item, "--tpr"));
      spec.tpr_targets.push_back(std::move(cells));
    }

    spec.confusion_spread = spread;
    spec.rng_seed = seed;
    const auto split_value = gfair::split_from_name(split);
    if (!split_value) throw InputError("--split: '" + split + "' is not train/dev/test");
    spec.split = *split_value;

    const auto records = gfair::generate_fixture(spec);

    echo.add("classes", schema_opts.classes);
    echo.add("groups", schema_opts.groups);
    echo.add("tpr", tpr);
    echo.add("n_per_cell",
             !n_per_cell.empty() ? n_per_cell : std::to_string(n_uniform) + " per cell");
    echo.add("spread", format6(spread));
    echo.add("seed", std::to_string(seed));
    echo.add("split", split);

    std::string text = echo.comments() + "instance_id,y,y_hat,z,split\n";
    for (const auto& r : records) {
      text += r.instance_id + "," + spec.schema.class_names[r.true_class] + "," +
              spec.schema.class_names[r.predicted_class] + "," +
              spec.schema.group_names[r.group] + "," +
              std::string(gfair::split_name(r.split)) + "\n";
    }
    write_output(text, out);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group-fairness aggregation, trade-off curves, and model selection"};
  app.require_subcommand(1);
  app.set_config("--config", "", "structured-text config file replicating any flag");

  MetricsCmd metrics;
  AggregateCmd aggregate;
  FrontierCmd frontier;
  DtoCmd dto_cmd;
  AucCmd auc;
  SelectCmd select_cmd;
  CompareCmd compare;
  ReportCmd report;
  FixtureCmd fixture;

  metrics.setup(app);
  aggregate.setup(app);
  frontier.setup(app);
  dto_cmd.setup(app);
  auc.setup(app);
  select_cmd.setup(app);
  compare.setup(app);
  report.setup(app);
  fixture.setup(app);

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const gfair::ParseError& e) {
    std::cerr << "error: ";
    if (e.line > 0) {
      std::cerr << "line " << e.line;
      if (e.field > 0) std::cerr << ", field " << e.field;
      std::cerr << ": ";
    }
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gfair::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gfair::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
