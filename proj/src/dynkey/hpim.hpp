#pragma once
// Closed-form pose interpolation from key-frame skeletons, plus the
// end-to-end select-then-interpolate pipeline with sliding windows.

#include <array>
#include <utility>
#include <vector>

#include "dynkey/dictionary.hpp"
#include "dynkey/selector.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

struct SkeletonSequence {
  // row k = [x_1, y_1, ..., x_J, y_J] at frame k (pixel units)
  Eigen::MatrixXd coords;  // T x 2J
  std::vector<std::vector<bool>> visibility;     // T x J
  std::vector<std::array<double, 4>> bbox;       // per-frame (x, y, w, h)

  int frames() const { return static_cast<int>(coords.rows()); }
  int joints() const { return static_cast<int>(coords.cols() / 2); }
};

// H = G(:,R) * G(R,R)^-1 * H_r — linear in the key skeletons; rows at the
// selected indices reproduce the inputs.
SkeletonSequence interpolate(const DynDictionary& pose_dict,
                             const std::vector<int>& selection,
                             const Eigen::MatrixXd& key_skeletons);

SkeletonSequence interpolate(const DynDictionary& pose_dict,
                             const Indicator& selection,
                             const Eigen::MatrixXd& key_skeletons);

struct PipelineConfig {
  SelectorConfig selector;
  // > 0 resolves lambda/rho per window from the data scale:
  //   lambda = lambda_scale * ||Y_win||_F^2 / T,  rho = rho_scale * mean diag G
  double lambda_scale = -1.0;
  double rho_scale = -1.0;
  int window = 40;  // frames per selection window when the clip is longer
};

SelectorConfig resolve_selector(const SelectorConfig& base, double lambda_scale,
                                double rho_scale, const DynDictionary& dict,
                                const FeatureSequence& seq);

struct PipelineResult {
  Indicator selection;  // over the full clip
  SkeletonSequence skeleton;
  std::vector<std::pair<int, int>> windows;  // [start, end) per window
};

// Splits clips longer than cfg.window into non-overlapping windows (remainder
// right-aligned; frames already covered keep their earlier values), pads
// shorter clips by repeating the last frame. Both dictionaries must be built
// at cfg.window rows.
PipelineResult pipeline(const DynDictionary& dict_features,
                        const DynDictionary& pose_dict,
                        const FeatureSequence& seq,
                        const SkeletonSequence& skeleton_source,
                        const PipelineConfig& cfg);

}  // namespace dynkey
