#include "gfair/dataset_io.hpp"

#include <random>
#include <sstream>

#include "doctest.h"
#include "gfair/errors.hpp"

using namespace gfair;

namespace {

DatasetSchema two_by_two() {
  DatasetSchema s;
  s.class_names = {"A", "B"};
  s.group_names = {"X", "Y"};
  return s;
}

std::vector<PredictionRecord> parse(const std::string& text, const DatasetSchema& schema) {
  std::istringstream in(text);
  return parse_records(in, schema);
}

}  // namespace

TEST_CASE("records: header-only file is empty") {
  CHECK(parse("instance_id,y,y_hat,z,split\n", two_by_two()).empty());
}

TEST_CASE("records: rows resolve names against the schema") {
  const auto recs = parse(
      "instance_id,y,y_hat,z,split\n"
      "\n"
      "# a comment line\n"
      "i1,A,A,X,train\n"
      "i2,A,B,Y,dev\n"
      "i3,B,B,X,test\n",
      two_by_two());
  REQUIRE(recs.size() == 3);
  CHECK(recs[0] == PredictionRecord{"i1", 0, 0, 0, Split::Train});
  CHECK(recs[1] == PredictionRecord{"i2", 0, 1, 1, Split::Dev});
  CHECK(recs[2] == PredictionRecord{"i3", 1, 1, 0, Split::Test});
}

TEST_CASE("records: header column order is free") {
  const auto recs = parse(
      "split,z,y_hat,y,instance_id\n"
      "test,Y,B,A,i1\n",
      two_by_two());
  REQUIRE(recs.size() == 1);
  CHECK(recs[0] == PredictionRecord{"i1", 0, 1, 1, Split::Test});
}

TEST_CASE("records: unknown names carry positions") {
  try {
    parse("instance_id,y,y_hat,z,split\ni1,A,A,Z,train\n", two_by_two());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.field == 4);  // the z column of that layout
  }
  CHECK_THROWS_AS(parse("instance_id,y,y_hat,z,split\ni1,C,A,X,train\n", two_by_two()),
                  ParseError);
  CHECK_THROWS_AS(parse("instance_id,y,y_hat,z,split\ni1,A,A,X,later\n", two_by_two()),
                  ParseError);
}

TEST_CASE("records: malformed layouts") {
  // Missing a required header column.
  CHECK_THROWS_AS(parse("instance_id,y,y_hat,split\ni1,A,A,train\n", two_by_two()),
                  ParseError);
  // Wrong field count in a data row.
  CHECK_THROWS_AS(parse("instance_id,y,y_hat,z,split\ni1,A,A,X\n", two_by_two()),
                  ParseError);
  // Duplicate instance_id within one split.
  CHECK_THROWS_AS(parse("instance_id,y,y_hat,z,split\n"
                        "i1,A,A,X,test\n"
                        "i1,B,B,Y,test\n",
                        two_by_two()),
                  ParseError);
  // The same id in different splits is a different instance.
  CHECK_NOTHROW(parse("instance_id,y,y_hat,z,split\n"
                      "i1,A,A,X,train\n"
                      "i1,B,B,Y,test\n",
                      two_by_two()));
}

TEST_CASE("confusions: parse a hand-written document") {
  std::istringstream in(R"({
    "format": "grouped-confusions/v1",
    "classes": ["A", "B"],
    "groups": ["X", "Y"],
    "positive_class": "B",
    "counts": {
      "X": [[5, 0], [0, 5]],
      "Y": [[5, 0], [0, 5]]
    }
  })");
  const auto gc = parse_confusions(in);
  CHECK(gc.schema == [] {
    auto s = two_by_two();
    s.positive_class = 1;
    return s;
  }());
  CHECK(gc.total() == 20);
  CHECK(gc.counts.size() == 2);       // one block per group...
  CHECK(gc.counts[0].size() == 2);    // ...each C x C
  CHECK(gc.counts[0][0].size() == 2);
}

TEST_CASE("confusions: document-level errors") {
  const auto reject = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_confusions(in), InputError);
  };
  reject("not json at all");
  reject(R"({"format": "something-else/v1", "classes": ["A","B"],
             "groups": ["X","Y"], "counts": {"X": [[1,0],[0,1]], "Y": [[1,0],[0,1]]}})");
  // Non-square block.
  reject(R"({"format": "grouped-confusions/v1", "classes": ["A","B"],
             "groups": ["X","Y"], "counts": {"X": [[1,0,0],[0,1,0]], "Y": [[1,0],[0,1]]}})");
  // Negative count.
  reject(R"({"format": "grouped-confusions/v1", "classes": ["A","B"],
             "groups": ["X","Y"], "counts": {"X": [[1,-1],[0,1]], "Y": [[1,0],[0,1]]}})");
  // Missing a group's block.
  reject(R"({"format": "grouped-confusions/v1", "classes": ["A","B"],
             "groups": ["X","Y"], "counts": {"X": [[1,0],[0,1]]}})");
  // A block for a group the schema does not know.
  reject(R"({"format": "grouped-confusions/v1", "classes": ["A","B"],
             "groups": ["X","Y"],
             "counts": {"X": [[1,0],[0,1]], "Y": [[1,0],[0,1]], "Z": [[1,0],[0,1]]}})");
}

TEST_CASE("confusions: export/parse round-trip on random payloads") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    GroupedConfusions gc;
    const std::size_t c = 2 + rng() % 4, g = 2 + rng() % 3;
    for (std::size_t i = 0; i < c; ++i) gc.schema.class_names.push_back("c" + std::to_string(i));
    for (std::size_t i = 0; i < g; ++i) gc.schema.group_names.push_back("g" + std::to_string(i));
    if (rng() % 2) gc.schema.positive_class = rng() % c;
    gc.counts.assign(g, std::vector<std::vector<std::int64_t>>(c, std::vector<std::int64_t>(c)));
    for (auto& block : gc.counts)
      for (auto& row : block)
        for (auto& cell : row) cell = static_cast<std::int64_t>(rng() % 1000);

    std::ostringstream out;
    export_confusions(gc, out);
    std::istringstream in(out.str());
    const auto back = parse_confusions(in);
    CHECK(back == gc);

    // Re-export is byte-identical: the writer is deterministic.
    std::ostringstream again;
    export_confusions(back, again);
    CHECK(again.str() == out.str());
  }
}
