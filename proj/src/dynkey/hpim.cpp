#include "dynkey/hpim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dynkey {

namespace {

void check_selection(const std::vector<int>& sel, int num_rows) {
  if (sel.empty()) throw std::invalid_argument("selection is empty");
  int prev = -1;
  for (int i : sel) {
    if (i < 0 || i >= num_rows)
      throw std::invalid_argument("selection index out of range");
    if (i <= prev)
      throw std::invalid_argument("selection must be strictly ascending");
    prev = i;
  }
}

// Most-parallel pair of selected dictionary rows, for the singularity message.
std::pair<int, int> nearest_row_pair(const DynDictionary& dict,
                                     const std::vector<int>& sel) {
  double best = -1.0;
  std::pair<int, int> out{sel[0], sel[0]};
  for (std::size_t a = 0; a < sel.size(); ++a)
    for (std::size_t b = a + 1; b < sel.size(); ++b) {
      const Eigen::RowVectorXd ra = dict.matrix.row(sel[a]);
      const Eigen::RowVectorXd rb = dict.matrix.row(sel[b]);
      const double denom = std::max(ra.norm() * rb.norm(), 1e-300);
      const double c = std::abs(ra.dot(rb)) / denom;
      if (c > best) {
        best = c;
        out = {sel[a], sel[b]};
      }
    }
  return out;
}

}  // namespace

SkeletonSequence interpolate(const DynDictionary& pose_dict,
                             const std::vector<int>& selection,
                             const Eigen::MatrixXd& key_skeletons) {
  check_selection(selection, pose_dict.num_rows);
  const int r = static_cast<int>(selection.size());
  if (key_skeletons.rows() != r)
    throw std::invalid_argument("one key skeleton row per selected frame");
  if (key_skeletons.cols() % 2 != 0)
    throw std::invalid_argument("key skeletons need an even column count");

  Eigen::MatrixXd Grr(r, r);
  Eigen::MatrixXd Gcols(pose_dict.num_rows, r);
  for (int i = 0; i < r; ++i) {
    Gcols.col(i) = pose_dict.gram.col(selection[i]);
    for (int j = 0; j < r; ++j)
      Grr(i, j) = pose_dict.gram(selection[i], selection[j]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Grr);
  const Eigen::VectorXd dv = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success ||
      dv.minCoeff() <= 1e-12 * std::max(dv.maxCoeff(), 1e-300)) {
    const auto [a, b] = nearest_row_pair(pose_dict, selection);
    throw std::runtime_error(
        "interpolation system is singular: dictionary rows " +
        std::to_string(a) + " and " + std::to_string(b) +
        " are numerically identical");
  }

  SkeletonSequence out;
  out.coords = Gcols * ldlt.solve(key_skeletons);
  const int J = static_cast<int>(key_skeletons.cols() / 2);
  out.visibility.assign(pose_dict.num_rows, std::vector<bool>(J, true));
  return out;
}

SkeletonSequence interpolate(const DynDictionary& pose_dict,
                             const Indicator& selection,
                             const Eigen::MatrixXd& key_skeletons) {
  return interpolate(pose_dict, selection.binarize(), key_skeletons);
}

SelectorConfig resolve_selector(const SelectorConfig& base, double lambda_scale,
                                double rho_scale, const DynDictionary& dict,
                                const FeatureSequence& seq) {
  SelectorConfig cfg = base;
  if (lambda_scale > 0.0)
    cfg.lambda = lambda_scale * seq.squaredNorm() / dict.num_rows;
  if (rho_scale > 0.0) cfg.rho = rho_scale * dict.gram.diagonal().mean();
  return cfg;
}

PipelineResult pipeline(const DynDictionary& dict_features,
                        const DynDictionary& pose_dict,
                        const FeatureSequence& seq,
                        const SkeletonSequence& skeleton_source,
                        const PipelineConfig& cfg) {
  const int T = static_cast<int>(seq.rows());
  const int W = cfg.window;
  if (W < 2) throw std::invalid_argument("window must be >= 2");
  if (dict_features.num_rows != W || pose_dict.num_rows != W)
    throw std::invalid_argument(
        "both dictionaries must be built at the window size");
  if (T < 1) throw std::invalid_argument("empty sequence");
  if (skeleton_source.frames() != T)
    throw std::invalid_argument("skeleton source frame count mismatch");

  // Window starts: non-overlapping, remainder right-aligned.
  std::vector<int> starts;
  if (T <= W) {
    starts.push_back(0);
  } else {
    for (int a = 0; a + W <= T; a += W) starts.push_back(a);
    if (starts.back() + W < T) starts.push_back(T - W);
  }

  PipelineResult res;
  res.selection.values = Eigen::VectorXd::Zero(T);
  res.selection.threshold = cfg.selector.threshold;
  res.skeleton.coords =
      Eigen::MatrixXd::Zero(T, skeleton_source.coords.cols());
  res.skeleton.visibility = skeleton_source.visibility;
  res.skeleton.bbox = skeleton_source.bbox;

  int covered = 0;  // frames [0, covered) already produced
  for (int a : starts) {
    const int end = std::min(a + W, T);
    // Pad short clips by repeating the last frame to fill the window.
    Eigen::MatrixXd ywin(W, seq.cols());
    for (int k = 0; k < W; ++k)
      ywin.row(k) = seq.row(std::min(a + k, T - 1));

    const SelectorConfig scfg = resolve_selector(
        cfg.selector, cfg.lambda_scale, cfg.rho_scale, dict_features, ywin);
    const Indicator ind = select_keyframes(dict_features, ywin, scfg).first;
    std::vector<int> local = ind.binarize();
    // Padded rows replicate frame T-1; collapse them onto it.
    std::vector<int> pruned;
    for (int i : local) {
      const int g = std::min(a + i, T - 1);
      if (pruned.empty() || pruned.back() != g - a) pruned.push_back(g - a);
    }
    local = pruned;
    if (local.empty())
      throw std::runtime_error(
          "pipeline: selection came back empty; lower lambda to keep more "
          "frames");

    Eigen::MatrixXd keys(static_cast<int>(local.size()),
                         skeleton_source.coords.cols());
    for (std::size_t i = 0; i < local.size(); ++i)
      keys.row(static_cast<int>(i)) =
          skeleton_source.coords.row(std::min(a + local[i], T - 1));
    const SkeletonSequence recon = interpolate(pose_dict, local, keys);

    for (int k = 0; k < W; ++k) {
      const int g = a + k;
      if (g >= covered && g < T)
        res.skeleton.coords.row(g) = recon.coords.row(k);
    }
    // Keys are the union across windows (overlap frames of the right-aligned
    // remainder window keep the earlier window's reconstruction).
    for (int i : local)
      res.selection.values[std::min(a + i, T - 1)] = 1.0;
    res.windows.emplace_back(a, end);
    covered = std::max(covered, end);
  }
  return res;
}

}  // namespace dynkey
