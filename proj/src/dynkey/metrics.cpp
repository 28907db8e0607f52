#include "dynkey/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynkey {

PckReport eval_pck(const SkeletonSequence& pred, const SkeletonSequence& gt,
                   const PckConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0))
    throw std::invalid_argument("beta must lie in (0, 1]");
  const int T = gt.frames();
  const int J = gt.joints();
  if (pred.frames() != T || pred.joints() != J)
    throw std::invalid_argument("prediction and ground truth shapes differ");
  if (static_cast<int>(gt.visibility.size()) != T)
    throw std::invalid_argument("ground truth lacks a visibility mask");
  if (static_cast<int>(gt.bbox.size()) != T)
    throw std::invalid_argument("ground truth lacks per-frame bboxes");

  std::vector<int> correct(J, 0), visible(J, 0);
  for (int k = 0; k < T; ++k) {
    const auto& box = gt.bbox[k];
    const double span = std::max(box[2], box[3]);
    if (!(span > 0.0) || !std::isfinite(span))
      throw std::runtime_error("frame " + std::to_string(k) +
                               " has a missing or degenerate bbox");
    const double radius = cfg.beta * span;
    for (int j = 0; j < J; ++j) {
      if (!gt.visibility[k][j]) continue;
      ++visible[j];
      const double dx = pred.coords(k, 2 * j) - gt.coords(k, 2 * j);
      const double dy = pred.coords(k, 2 * j + 1) - gt.coords(k, 2 * j + 1);
      if (std::hypot(dx, dy) <= radius) ++correct[j];
    }
  }

  PckReport rep;
  rep.per_joint.resize(J);
  rep.visible_counts = visible;
  double sum = 0.0;
  int counted = 0;
  for (int j = 0; j < J; ++j) {
    if (visible[j] == 0) {
      rep.per_joint[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    rep.per_joint[j] = 100.0 * correct[j] / visible[j];
    sum += rep.per_joint[j];
    ++counted;
  }
  rep.overall = counted ? sum / counted : 0.0;
  return rep;
}

}  // namespace dynkey
