#include "gfair/schema.hpp"

#include <algorithm>
#include <unordered_set>

#include "gfair/errors.hpp"

namespace gfair {

std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  throw InternalError("unhandled Split value");
}

std::optional<Split> split_from_name(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "dev") return Split::Dev;
  if (name == "test") return Split::Test;
  return std::nullopt;
}

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& names,
                                    std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

void check_names(const std::vector<std::string>& names, const char* what) {
  if (names.size() < 2)
    throw InputError(std::string("schema needs at least 2 ") + what + " names, got " +
                     std::to_string(names.size()));
  std::unordered_set<std::string_view> seen;
  for (const auto& n : names) {
    if (n.empty()) throw InputError(std::string("empty ") + what + " name in schema");
    if (!seen.insert(n).second)
      throw InputError(std::string("duplicate ") + what + " name '" + n + "' in schema");
  }
}

}  // namespace

std::optional<std::size_t> DatasetSchema::class_index(std::string_view name) const {
  return index_of(class_names, name);
}

std::optional<std::size_t> DatasetSchema::group_index(std::string_view name) const {
  return index_of(group_names, name);
}

void DatasetSchema::validate() const {
  check_names(class_names, "class");
  check_names(group_names, "group");
  if (positive_class && *positive_class >= class_names.size())
    throw InputError("positive_class index " + std::to_string(*positive_class) +
                     " out of range for " + std::to_string(class_names.size()) +
                     " classes");
}

std::int64_t GroupedConfusions::total() const {
  std::int64_t sum = 0;
  for (std::size_t g = 0; g < counts.size(); ++g) sum += group_total(g);
  return sum;
}

std::int64_t GroupedConfusions::group_total(std::size_t g) const {
  std::int64_t sum = 0;
  for (const auto& row : counts[g])
    for (std::int64_t v : row) sum += v;
  return sum;
}

void GroupedConfusions::validate() const {
  schema.validate();
  const std::size_t c = schema.num_classes();
  const std::size_t g = schema.num_groups();
  if (counts.size() != g)
    throw InputError("confusions hold " + std::to_string(counts.size()) +
                     " group blocks for " + std::to_string(g) + " groups");
  for (std::size_t gi = 0; gi < g; ++gi) {
    if (counts[gi].size() != c)
      throw InputError("group '" + schema.group_names[gi] + "' block has " +
                       std::to_string(counts[gi].size()) + " rows, expected " +
                       std::to_string(c));
    for (std::size_t ci = 0; ci < c; ++ci) {
      if (counts[gi][ci].size() != c)
        throw InputError("group '" + schema.group_names[gi] + "' row " +
                         std::to_string(ci) + " has " +
                         std::to_string(counts[gi][ci].size()) +
                         " columns, expected " + std::to_string(c));
      for (std::int64_t v : counts[gi][ci])
        if (v < 0)
          throw InputError("negative count " + std::to_string(v) + " in group '" +
                           schema.group_names[gi] + "'");
    }
  }
}

}  // namespace gfair
