#include "gfair/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

#include "gfair/errors.hpp"
#include "gfair/group_metrics.hpp"

namespace gfair {

namespace {

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Shortest decimal that round-trips back to the same double.
std::string roundtrip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string align_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i)
      widths[i] = std::max(widths[i], row[i].size());
  }
  std::ostringstream out;
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

std::string joint_distribution(const GroupedConfusions& confusions) {
  const auto& schema = confusions.schema;
  const std::size_t nc = schema.num_classes();
  const std::size_t ng = schema.num_groups();
  const double total = static_cast<double>(confusions.total());

  const auto cell = [&](std::int64_t n) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%lld (%.1f%%)", static_cast<long long>(n),
                  total > 0.0 ? 100.0 * static_cast<double>(n) / total : 0.0);
    return std::string(buf);
  };

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"class \\ group"};
  for (const auto& g : schema.group_names) head.push_back(g);
  head.push_back("all");
  rows.push_back(std::move(head));

  std::vector<std::int64_t> group_sums(ng, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<std::string> row{schema.class_names[c]};
    std::int64_t class_sum = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      std::int64_t n = 0;
      for (std::size_t p = 0; p < nc; ++p) n += confusions.counts[g][c][p];
      row.push_back(cell(n));
      class_sum += n;
      group_sums[g] += n;
    }
    row.push_back(cell(class_sum));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> foot{"all"};
  for (std::size_t g = 0; g < ng; ++g) foot.push_back(cell(group_sums[g]));
  foot.push_back(cell(confusions.total()));
  rows.push_back(std::move(foot));

  return align_table(rows);
}

std::string describe_unit(const BasicUnit& unit) {
  switch (unit.kind) {
    case UnitKind::Score: return "score (the raw per-group metric value)";
    case UnitKind::Gap: return "gap (absolute difference to the class reference mean)";
    case UnitKind::Ratio: return "ratio (metric value over the class reference mean)";
    case UnitKind::GapThreshold:
      return "gap threshold (1 when the gap is within " + format_short(unit.gamma) +
             " of the reference mean)";
    case UnitKind::RatioThreshold:
      return "ratio threshold (1 when the ratio is within " + format_short(unit.gamma) +
             " of 1)";
  }
  throw InternalError("unhandled UnitKind");
}

std::string describe_exponent(double p) {
  if (std::isinf(p)) return p > 0 ? "the maximum (p = +inf)" : "the minimum (p = -inf)";
  if (p == 1.0) return "the arithmetic mean (p = 1)";
  if (p == 2.0) return "the quadratic mean (p = 2)";
  return "a generalized mean with exponent p = " + format_short(p);
}

std::string describe_group(const AggregationSpec& spec) {
  switch (spec.group_form) {
    case GroupForm::PowerMean: {
      std::string s = describe_exponent(spec.group_p) + " over the groups";
      if (spec.group_weights) s += ", with explicit group weights";
      return s;
    }
    case GroupForm::Sum: return "the sum over the defined group cells";
    case GroupForm::Variance: return "the sample variance of the gaps across groups";
    case GroupForm::SpanDifference: return "largest minus smallest across groups";
    case GroupForm::SpanRatio: return "largest over smallest across groups";
  }
  throw InternalError("unhandled GroupForm");
}

std::string describe_class(const AggregationSpec& spec) {
  std::string how;
  switch (spec.class_method.method) {
    case ClassMethod::Mean: how = "the arithmetic mean over the classes"; break;
    case ClassMethod::QuadraticMean: how = "the quadratic mean over the classes"; break;
    case ClassMethod::Binary:
      how = "the single class at index " + std::to_string(spec.class_method.binary_class);
      break;
    case ClassMethod::GeneralizedMean:
      how = describe_exponent(spec.class_method.p) + " over the classes";
      break;
  }
  switch (spec.direction) {
    case Direction::SmallerFairer: how += "; fairness = 1 - delta, clamped to [0,1]"; break;
    case Direction::LargerFairer: how += "; fairness = delta, clamped to [0,1]"; break;
    case Direction::RatioAroundOne:
      how += "; fairness = min(delta, 1/delta), clamped to [0,1]";
      break;
  }
  return how;
}

}  // namespace

// ===== checklist ============================================================

ChecklistReport checklist_report(const GroupedConfusions& confusions,
                                 BaseMetricKind kind, const AggregationSpec& spec,
                                 const ChecklistMotivations& motivations) {
  confusions.validate();
  spec.validate();

  ChecklistReport rep;
  rep.dataset_stats = joint_distribution(confusions);

  rep.metric.heading = "base metric";
  rep.metric.body = std::string(metric_name(kind));
  if (spec.mean_mode)
    rep.metric.body += std::string(" (reference mean: ") +
                       std::string(mean_mode_name(*spec.mean_mode)) + ")";
  rep.metric.motivation = motivations.metric;

  rep.unit.heading = "basic unit";
  rep.unit.body = describe_unit(spec.unit);
  rep.unit.motivation = motivations.unit;

  rep.group_aggregation.heading = "group aggregation";
  rep.group_aggregation.body = describe_group(spec);
  rep.group_aggregation.motivation = motivations.group_aggregation;

  rep.class_aggregation.heading = "class aggregation";
  rep.class_aggregation.body = describe_class(spec);
  rep.class_aggregation.motivation = motivations.class_aggregation;

  rep.complete = !motivations.metric.empty() && !motivations.unit.empty() &&
                 !motivations.group_aggregation.empty() &&
                 !motivations.class_aggregation.empty();
  return rep;
}

ChecklistReport checklist_report(const std::vector<PredictionRecord>& records,
                                 const DatasetSchema& schema, BaseMetricKind kind,
                                 const AggregationSpec& spec,
                                 const ChecklistMotivations& motivations) {
  const auto confusions = confusions_from_records(records, schema);
  ChecklistReport rep = checklist_report(confusions, kind, spec, motivations);

  std::array<std::size_t, 3> sizes{0, 0, 0};
  for (const auto& r : records) sizes[static_cast<std::size_t>(r.split)] += 1;
  std::string splits = "splits: ";
  for (auto s : {Split::Train, Split::Dev, Split::Test}) {
    if (s != Split::Train) splits += ", ";
    splits += std::string(split_name(s)) + "=" +
              std::to_string(sizes[static_cast<std::size_t>(s)]);
  }
  rep.dataset_stats += splits + "\n";
  return rep;
}

std::string ChecklistReport::to_text() const {
  std::ostringstream out;
  out << "== aggregation checklist ==\n";
  if (!complete) out << "(incomplete: at least one motivation is missing)\n";
  out << "\n[1] dataset\n" << dataset_stats;
  int idx = 2;
  for (const ChecklistItem* item :
       {&metric, &unit, &group_aggregation, &class_aggregation}) {
    out << "\n[" << idx++ << "] " << item->heading << "\n";
    out << "choice: " << item->body << "\n";
    out << "why:    " << (item->motivation.empty() ? "(missing)" : item->motivation)
        << "\n";
  }
  return out.str();
}

// ===== curve export =========================================================

namespace {

void check_frontier_shape(const Frontier& fr) {
  if (fr.points.empty()) throw InputError("empty frontier");
  for (const auto& p : fr.points) {
    if (!(p.performance >= 0.0 && p.performance <= 1.0) ||
        !(p.fairness >= 0.0 && p.fairness <= 1.0))
      throw InputError("frontier coordinates must lie in [0,1]");
  }
  for (std::size_t i = 1; i < fr.points.size(); ++i)
    if (!(fr.points[i].performance < fr.points[i - 1].performance) ||
        !(fr.points[i].fairness > fr.points[i - 1].fairness))
      throw InputError(
          "frontier points must be strictly decreasing in performance and "
          "strictly increasing in fairness");
}

std::string svg_curve(const Frontier& fr, CurveMode mode) {
  // Fairness on x (the sweep axis of the areas), performance on y.
  constexpr double kSize = 480.0, kMargin = 48.0;
  const auto px = [&](double f) { return kMargin + f * kSize; };
  const auto py = [&](double p) { return kMargin + (1.0 - p) * kSize; };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return std::string(buf);
  };

  std::ostringstream out;
  const double w = kSize + 2 * kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << w
      << "\">\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" fill=\"none\" stroke=\"#999\"/>\n";

  // Boundary polyline from (f=0, p=p1) through the points to (f=fk, p=0);
  // Step inserts the axis-parallel corner between neighbours.
  const auto& pts = fr.points;
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  out << num(px(0.0)) << "," << num(py(pts.front().performance));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (mode == CurveMode::Step && i > 0)
      out << " " << num(px(pts[i - 1].fairness)) << "," << num(py(pts[i].performance));
    out << " " << num(px(pts[i].fairness)) << "," << num(py(pts[i].performance));
  }
  out << " " << num(px(pts.back().fairness)) << "," << num(py(0.0));
  out << "\"/>\n";

  for (const auto& p : pts)
    out << "<circle class=\"pt\" cx=\"" << num(px(p.fairness)) << "\" cy=\""
        << num(py(p.performance)) << "\" r=\"4\" fill=\"#1f77b4\"/>\n";

  out << "<circle class=\"utopia\" cx=\"" << num(px(1.0)) << "\" cy=\"" << num(py(1.0))
      << "\" r=\"5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << num(kMargin + kSize / 2) << "\" y=\"" << num(w - 10)
      << "\" text-anchor=\"middle\" font-size=\"14\">fairness</text>\n";
  out << "<text x=\"14\" y=\"" << num(kMargin + kSize / 2)
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 14 "
      << num(kMargin + kSize / 2) << ")\">performance</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string export_curve(const Frontier& frontier, CurveFormat format, CurveMode mode) {
  check_frontier_shape(frontier);
  if (format == CurveFormat::SVG) return svg_curve(frontier, mode);
  std::string out = "performance,fairness\n";
  for (const auto& p : frontier.points)
    out += roundtrip(p.performance) + "," + roundtrip(p.fairness) + "\n";
  return out;
}

// ===== point parsing ========================================================

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_unit_value(std::string_view text, std::size_t lineno, std::size_t field) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError("'" + s + "' is not a number", lineno, field);
  if (v < 0.0 || v > 1.0)
    throw ParseError("'" + s + "' is outside [0,1]", lineno, field);
  return v;
}

}  // namespace

std::vector<TradeoffPoint> parse_points(std::istream& in) {
  std::vector<TradeoffPoint> points;
  std::string line;
  std::size_t lineno = 0;
  int col_perf = -1, col_fair = -1;
  std::size_t n_cols = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto fields = split_fields(sv);

    if (col_perf < 0) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "performance") {
          if (col_perf >= 0) throw ParseError("duplicate column 'performance'", lineno, i + 1);
          col_perf = static_cast<int>(i);
        } else if (fields[i] == "fairness") {
          if (col_fair >= 0) throw ParseError("duplicate column 'fairness'", lineno, i + 1);
          col_fair = static_cast<int>(i);
        } else {
          throw ParseError("unexpected column '" + std::string(fields[i]) + "'", lineno,
                           i + 1);
        }
      }
      if (col_perf < 0 || col_fair < 0)
        throw ParseError("header must name the columns performance and fairness",
                         lineno);
      n_cols = fields.size();
      continue;
    }

    if (fields.size() != n_cols)
      throw ParseError("expected " + std::to_string(n_cols) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    TradeoffPoint p;
    p.performance = parse_unit_value(fields[static_cast<std::size_t>(col_perf)], lineno,
                                     static_cast<std::size_t>(col_perf) + 1);
    p.fairness = parse_unit_value(fields[static_cast<std::size_t>(col_fair)], lineno,
                                  static_cast<std::size_t>(col_fair) + 1);
    points.push_back(p);
  }
  if (col_perf < 0)
    throw ParseError("missing header line (performance,fairness)", lineno);
  return points;
}

}  // namespace gfair
