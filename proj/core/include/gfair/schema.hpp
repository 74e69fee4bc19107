// Core dataset vocabulary: class/group names, one labeled prediction, and
// per-group confusion matrices (the reproducibility unit of this library's
// file formats).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gfair {

enum class Split { Train, Dev, Test };

std::string_view split_name(Split s);
std::optional<Split> split_from_name(std::string_view name);

// The class and group vocabulary every index in this library resolves
// against. Invariants (checked by validate()): C >= 2, G >= 2, names unique
// and non-empty, positive_class (when set) a valid class index.
struct DatasetSchema {
  std::vector<std::string> class_names;
  std::vector<std::string> group_names;
  std::optional<std::size_t> positive_class;

  std::size_t num_classes() const { return class_names.size(); }
  std::size_t num_groups() const { return group_names.size(); }

  std::optional<std::size_t> class_index(std::string_view name) const;
  std::optional<std::size_t> group_index(std::string_view name) const;

  // Throws InputError when an invariant is violated.
  void validate() const;

  bool operator==(const DatasetSchema&) const = default;
};

// One labeled instance: true class y, predicted class y_hat, group z.
// Features are out of scope; instance_id is the only handle to the input.
struct PredictionRecord {
  std::string instance_id;
  std::size_t true_class = 0;
  std::size_t predicted_class = 0;
  std::size_t group = 0;
  Split split = Split::Test;

  bool operator==(const PredictionRecord&) const = default;
};

// One C x C count matrix per group; counts[g][c][c'] is the number of
// instances in group g with true class c predicted as c'.
struct GroupedConfusions {
  DatasetSchema schema;
  std::vector<std::vector<std::vector<std::int64_t>>> counts;

  std::int64_t total() const;
  std::int64_t group_total(std::size_t g) const;

  // Throws InputError on shape mismatch or a negative count.
  void validate() const;

  bool operator==(const GroupedConfusions&) const = default;
};

}  // namespace gfair
