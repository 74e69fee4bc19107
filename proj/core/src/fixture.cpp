#include "gfair/fixture.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gfair/errors.hpp"

namespace gfair {

std::vector<PredictionRecord> generate_fixture(const FixtureSpec& spec) {
  spec.schema.validate();
  const std::size_t nc = spec.schema.num_classes();
  const std::size_t ng = spec.schema.num_groups();
  if (spec.n_per_cell.size() != nc || spec.tpr_targets.size() != nc)
    throw InputError("fixture tables must have one row per class");
  for (std::size_t c = 0; c < nc; ++c) {
    if (spec.n_per_cell[c].size() != ng || spec.tpr_targets[c].size() != ng)
      throw InputError("fixture tables must have one column per group");
    for (std::size_t g = 0; g < ng; ++g) {
      if (spec.n_per_cell[c][g] <= 0)
        throw InputError("every fixture cell needs a positive record count");
      const double t = spec.tpr_targets[c][g];
      if (!(t > 0.0 && t <= 1.0))
        throw InputError("TPR targets must lie in (0,1] (got " + std::to_string(t) +
                         ")");
    }
  }
  if (!(spec.confusion_spread >= 0.0 && spec.confusion_spread <= 1.0))
    throw InputError("confusion_spread must lie in [0,1]");

  std::mt19937_64 rng(spec.rng_seed);
  // 53-bit mantissa draw in [0,1); stable across platforms, unlike the
  // distribution classes.
  const auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  std::vector<PredictionRecord> records;
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t g = 0; g < ng; ++g) {
      // Miss mass over the wrong classes: a uniform share plus a lump on the
      // "next" class, blended by confusion_spread.
      std::vector<double> wrong_weight(nc, 0.0);
      const std::size_t next = (c + 1) % nc;
      for (std::size_t j = 0; j < nc; ++j) {
        if (j == c) continue;
        wrong_weight[j] = spec.confusion_spread / static_cast<double>(nc - 1) +
                          (j == next ? 1.0 - spec.confusion_spread : 0.0);
      }

      for (std::int64_t i = 0; i < spec.n_per_cell[c][g]; ++i) {
        PredictionRecord rec;
        rec.instance_id = "c" + std::to_string(c) + "_g" + std::to_string(g) + "_" +
                          std::to_string(i);
        rec.true_class = c;
        rec.group = g;
        rec.split = spec.split;
        if (uniform() < spec.tpr_targets[c][g]) {
          rec.predicted_class = c;
        } else {
          const double u = uniform();
          double cum = 0.0;
          std::size_t pick = next;
          for (std::size_t j = 0; j < nc; ++j) {
            if (j == c) continue;
            pick = j;  // the last wrong class absorbs any floating residue
            cum += wrong_weight[j];
            if (u < cum) break;
          }
          rec.predicted_class = pick;
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

}  // namespace gfair
