// Synthetic dataset generation: records with configurable per-cell sizes
// and per-cell TPR targets, for demos and end-to-end tests.
#pragma once

#include <cstdint>
#include <vector>

#include "gfair/schema.hpp"

namespace gfair {

// Cell (c,g) receives exactly n_per_cell[c][g] records with true class c
// and group g; each is predicted correctly with probability
// tpr_targets[c][g], otherwise the predicted class is drawn from the wrong
// classes: confusion_spread = 1 spreads the miss mass uniformly, 0 puts it
// all on the next class (c+1 mod C), values between interpolate linearly.
struct FixtureSpec {
  DatasetSchema schema;
  std::vector<std::vector<std::int64_t>> n_per_cell;  // [c][g], all > 0
  std::vector<std::vector<double>> tpr_targets;       // [c][g], in (0,1]
  double confusion_spread = 1.0;                      // in [0,1]
  std::uint64_t rng_seed = 0;
  Split split = Split::Test;
};

// Deterministic for a given spec (bit-identical record lists).
std::vector<PredictionRecord> generate_fixture(const FixtureSpec& spec);

}  // namespace gfair
