// Parsers and writers for the two dataset interchange formats:
//
// Prediction records: UTF-8 CSV with a header row naming the columns
//   instance_id, y, y_hat, z, split (case-sensitive, any order). Values for
//   y / y_hat / z are class/group *names* resolved against the schema; split
//   is one of train/dev/test. Blank lines and lines starting with '#' are
//   ignored. Errors carry 1-based line/field positions.
//
// Grouped confusions: a JSON document carrying its own schema:
//   { "format": "grouped-confusions/v1",
//     "classes": [...], "groups": [...],
//     "positive_class": "<class name>",        // optional
//     "counts": { "<group>": [[...], ...] } }   // one C x C block per group
#pragma once

#include <iosfwd>
#include <vector>

#include "gfair/schema.hpp"

namespace gfair {

// Every row becomes one record, in input order; duplicate instance_id within
// a split is an error, as is any name not present in the schema.
std::vector<PredictionRecord> parse_records(std::istream& in,
                                            const DatasetSchema& schema);

GroupedConfusions parse_confusions(std::istream& in);

// Deterministic; parse_confusions(export_confusions(x)) == x.
void export_confusions(const GroupedConfusions& confusions, std::ostream& out);

}  // namespace gfair
