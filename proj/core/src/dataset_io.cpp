#include "gfair/dataset_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "gfair/errors.hpp"

namespace gfair {

namespace {

constexpr const char* kConfusionFormat = "grouped-confusions/v1";

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

std::vector<PredictionRecord> parse_records(std::istream& in,
                                            const DatasetSchema& schema) {
  schema.validate();

  const std::vector<std::string> wanted = {"instance_id", "y", "y_hat", "z", "split"};
  std::vector<std::size_t> col(wanted.size());  // wanted index -> field index

  std::vector<PredictionRecord> records;
  // ids already seen, per split, to reject duplicates within a split
  std::set<std::pair<Split, std::string>> seen;

  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n_columns = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto fields = split_fields(line);

    if (!have_header) {
      std::vector<bool> used(fields.size(), false);
      for (std::size_t w = 0; w < wanted.size(); ++w) {
        std::size_t hit = fields.size();
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (fields[f] == wanted[w]) {
            if (hit != fields.size())
              throw ParseError("duplicate header column '" + wanted[w] + "'", lineno,
                               f + 1);
            hit = f;
          }
        }
        if (hit == fields.size())
          throw ParseError("header is missing column '" + wanted[w] + "'", lineno);
        col[w] = hit;
        used[hit] = true;
      }
      for (std::size_t f = 0; f < fields.size(); ++f)
        if (!used[f])
          throw ParseError("unexpected header column '" + std::string(fields[f]) + "'",
                           lineno, f + 1);
      n_columns = fields.size();
      have_header = true;
      continue;
    }

    if (fields.size() != n_columns)
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(n_columns),
                       lineno);

    PredictionRecord rec;
    rec.instance_id = std::string(fields[col[0]]);
    if (rec.instance_id.empty()) throw ParseError("empty instance_id", lineno, col[0] + 1);

    const auto y = schema.class_index(fields[col[1]]);
    if (!y)
      throw ParseError("unknown class name '" + std::string(fields[col[1]]) + "'", lineno,
                       col[1] + 1);
    rec.true_class = *y;

    const auto yh = schema.class_index(fields[col[2]]);
    if (!yh)
      throw ParseError("unknown class name '" + std::string(fields[col[2]]) + "'", lineno,
                       col[2] + 1);
    rec.predicted_class = *yh;

    const auto z = schema.group_index(fields[col[3]]);
    if (!z)
      throw ParseError("unknown group name '" + std::string(fields[col[3]]) + "'", lineno,
                       col[3] + 1);
    rec.group = *z;

    const auto sp = split_from_name(fields[col[4]]);
    if (!sp)
      throw ParseError("unknown split '" + std::string(fields[col[4]]) +
                           "' (expected train, dev or test)",
                       lineno, col[4] + 1);
    rec.split = *sp;

    if (!seen.emplace(rec.split, rec.instance_id).second)
      throw ParseError("duplicate instance_id '" + rec.instance_id + "' within split '" +
                           std::string(split_name(rec.split)) + "'",
                       lineno, col[0] + 1);

    records.push_back(std::move(rec));
  }

  // The header is required even for an empty dataset; a header-only file
  // yields an empty list, a headerless one is malformed.
  if (!have_header)
    throw ParseError("missing header row (expected instance_id,y,y_hat,z,split)", lineno);
  return records;
}

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const json& require_key(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(std::string("confusion file is missing '") + key + "' in " + where);
  return *it;
}

std::vector<std::string> string_list(const json& arr, const char* what) {
  if (!arr.is_array())
    throw ParseError(std::string("'") + what + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string())
      throw ParseError(std::string("'") + what + "' must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

GroupedConfusions parse_confusions(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);  // nlohmann reports 1-based line/column positions
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("confusion file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("confusion file must be a JSON object");

  const auto& fmt = require_key(doc, "format", "the document");
  if (!fmt.is_string() || fmt.get<std::string>() != kConfusionFormat)
    throw ParseError(std::string("unsupported format tag (expected '") + kConfusionFormat +
                     "')");

  GroupedConfusions out;
  out.schema.class_names = string_list(require_key(doc, "classes", "the document"),
                                       "classes");
  out.schema.group_names = string_list(require_key(doc, "groups", "the document"),
                                       "groups");
  if (const auto it = doc.find("positive_class"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("'positive_class' must be a class name");
    const auto idx = out.schema.class_index(it->get<std::string>());
    if (!idx)
      throw ParseError("positive_class '" + it->get<std::string>() +
                       "' is not a listed class");
    out.schema.positive_class = *idx;
  }
  out.schema.validate();

  const auto& blocks = require_key(doc, "counts", "the document");
  if (!blocks.is_object()) throw ParseError("'counts' must map group names to matrices");
  for (const auto& [name, _] : blocks.items())
    if (!out.schema.group_index(name))
      throw ParseError("counts block for unknown group '" + name + "'");

  const std::size_t c = out.schema.num_classes();
  out.counts.resize(out.schema.num_groups());
  for (std::size_t g = 0; g < out.schema.num_groups(); ++g) {
    const auto& gname = out.schema.group_names[g];
    const auto it = blocks.find(gname);
    if (it == blocks.end())
      throw ParseError("missing counts block for group '" + gname + "'");
    if (!it->is_array() || it->size() != c)
      throw ParseError("group '" + gname + "' block must be a " + std::to_string(c) + "x" +
                       std::to_string(c) + " matrix");
    auto& mat = out.counts[g];
    mat.resize(c);
    for (std::size_t row = 0; row < c; ++row) {
      const auto& jrow = (*it)[row];
      if (!jrow.is_array() || jrow.size() != c)
        throw ParseError("group '" + gname + "' row " + std::to_string(row + 1) + " must " +
                         "hold " + std::to_string(c) + " counts");
      mat[row].resize(c);
      for (std::size_t cc = 0; cc < c; ++cc) {
        const auto& v = jrow[cc];
        if (!v.is_number_integer())
          throw ParseError("group '" + gname + "' has a non-integer count at row " +
                           std::to_string(row + 1) + ", column " + std::to_string(cc + 1));
        const auto n = v.get<std::int64_t>();
        if (n < 0)
          throw ParseError("negative count " + std::to_string(n) + " in group '" + gname +
                           "' at row " + std::to_string(row + 1) + ", column " +
                           std::to_string(cc + 1));
        mat[row][cc] = n;
      }
    }
  }
  out.validate();
  return out;
}

void export_confusions(const GroupedConfusions& confusions, std::ostream& out) {
  confusions.validate();
  ordered_json doc;
  doc["format"] = kConfusionFormat;
  doc["classes"] = confusions.schema.class_names;
  doc["groups"] = confusions.schema.group_names;
  if (confusions.schema.positive_class)
    doc["positive_class"] = confusions.schema.class_names[*confusions.schema.positive_class];
  ordered_json blocks = ordered_json::object();
  for (std::size_t g = 0; g < confusions.schema.num_groups(); ++g)
    blocks[confusions.schema.group_names[g]] = confusions.counts[g];
  doc["counts"] = std::move(blocks);
  out << doc.dump(2) << '\n';
}

}  // namespace gfair
