#include "dynkey/online.hpp"

#include <cmath>
#include <stdexcept>

#include "dynkey/hpim.hpp"

namespace dynkey {

namespace {
constexpr double kEps = 1e-12;
}

OnlineState init_online(const DynDictionary& dict,
                        const FeatureSequence& seq_prefix,
                        const OnlineConfig& cfg) {
  if (dict.num_rows < 2)
    throw std::invalid_argument("warm-up horizon must be >= 2 frames");
  if (seq_prefix.rows() != dict.num_rows)
    throw std::invalid_argument("prefix rows must match dictionary rows");
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("tau must be positive");

  OnlineState st;
  st.dict = dict;
  st.tau = cfg.tau;
  st.cfg = cfg;
  st.history = seq_prefix;
  if (seq_prefix.norm() > 0.0) {
    const SelectorConfig scfg = resolve_selector(
        cfg.selector, cfg.lambda_scale, cfg.rho_scale, dict, seq_prefix);
    st.selected = select_keyframes(dict, seq_prefix, scfg).first.binarize();
  }
  st.key_rows.resize(static_cast<int>(st.selected.size()), seq_prefix.cols());
  for (std::size_t i = 0; i < st.selected.size(); ++i)
    st.key_rows.row(static_cast<int>(i)) = seq_prefix.row(st.selected[i]);
  return st;
}

Eigen::VectorXd predict_next(const OnlineState& state) {
  if (state.selected.empty())
    throw std::logic_error("predict_next requires at least one key frame");
  const int t = state.dict.num_rows;
  const DynDictionary ext = extend_rows(state.dict, 1);

  if (state.cfg.code_alpha <= 0.0) {
    // Exact minimum-norm code of the key rows, read out at the new row.
    const AtomicCode code =
        min_norm_code(ext, state.selected, state.key_rows, state.cfg.jitter);
    return (ext.matrix.row(t) * code.matrix).transpose();
  }

  // Lasso code on columns renormalized over the observed horizon. Without
  // this, column norms grow with the horizon and bias the l1 penalty toward
  // exactly the fast atoms that extrapolate worst.
  Eigen::MatrixXd cols = ext.matrix;
  for (int j = 0; j < cols.cols(); ++j) {
    const double nrm = cols.col(j).head(t).norm();
    cols.col(j) /= std::max(nrm, kEps);
  }
  const int r = static_cast<int>(state.selected.size());
  Eigen::MatrixXd Dr(r, cols.cols());
  for (int i = 0; i < r; ++i) Dr.row(i) = cols.row(state.selected[i]);
  const Eigen::MatrixXd C =
      lasso_solve(Dr, state.key_rows, state.cfg.code_alpha,
                  state.cfg.code_max_iter, state.cfg.code_tol);
  return (cols.row(t) * C).transpose();
}

bool step(OnlineState& state, const Eigen::VectorXd& incoming,
          StepInfo* info) {
  if (incoming.size() != state.history.cols())
    throw std::invalid_argument("incoming frame has the wrong feature width");
  const int t = state.dict.num_rows;

  Eigen::VectorXd pred = Eigen::VectorXd::Zero(incoming.size());
  if (!state.selected.empty()) pred = predict_next(state);
  const double residual =
      (incoming - pred).norm() / std::max(incoming.norm(), kEps);
  const bool admitted = residual > state.tau;

  state.dict = extend_rows(state.dict, 1);
  state.history.conservativeResize(t + 1, Eigen::NoChange);
  state.history.row(t) = incoming.transpose();
  if (admitted) {
    state.selected.push_back(t);
    state.key_rows.conservativeResize(state.key_rows.rows() + 1,
                                      Eigen::NoChange);
    state.key_rows.row(state.key_rows.rows() - 1) = incoming.transpose();
  }
  if (info) {
    info->residual = residual;
    info->prediction = pred;
  }
  return admitted;
}

}  // namespace dynkey
