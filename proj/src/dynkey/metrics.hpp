#pragma once
// PCK: a visible joint is correct when its prediction lands within
// beta * max(bbox height, width) of the ground truth.

#include <vector>

#include "dynkey/hpim.hpp"

namespace dynkey {

struct PckConfig {
  double beta = 0.2;  // in (0, 1]
};

struct PckReport {
  // Per-joint percentage in [0, 100]; NaN for joints never visible.
  std::vector<double> per_joint;
  std::vector<int> visible_counts;
  double overall = 0.0;  // mean over joints with at least one visible frame
};

PckReport eval_pck(const SkeletonSequence& pred, const SkeletonSequence& gt,
                   const PckConfig& cfg = {});

}  // namespace dynkey
