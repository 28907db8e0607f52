#include "dynkey/sparse_coding.hpp"

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

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& x, double thr) {
  return x.array().sign() * (x.array().abs() - thr).max(0.0);
}

}  // namespace

double lasso_objective(const Eigen::MatrixXd& dict_matrix,
                       const Eigen::MatrixXd& seq,
                       const Eigen::MatrixXd& code, double alpha) {
  return (seq - dict_matrix * code).squaredNorm() +
         alpha * code.array().abs().sum();
}

Eigen::MatrixXd lasso_solve(const Eigen::MatrixXd& D, const Eigen::MatrixXd& Y,
                            double alpha, int max_iter, double tol,
                            LassoStats* stats) {
  if (Y.rows() != D.rows())
    throw std::invalid_argument("sequence rows do not match dictionary rows");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  const int N = static_cast<int>(D.cols());
  const int M = static_cast<int>(Y.cols());

  // lambda_max(D^T D) by power iteration through D (never forms the N x N
  // Gram; the dictionaries here are short and wide). The estimate converges
  // from below, hence the safety factor.
  double L;
  {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(N));
    double lam = 0.0;
    for (int it = 0; it < 500; ++it) {
      const Eigen::VectorXd w = D.transpose() * (D * v);
      const double lam_new = v.dot(w);
      const double wn = w.norm();
      if (wn < 1e-300) break;  // D v in the null space; restart not needed
      v = w / wn;
      if (it > 0 && std::abs(lam_new - lam) <= 1e-12 * std::abs(lam_new)) {
        lam = lam_new;
        break;
      }
      lam = lam_new;
    }
    L = std::max(lam, 0.0) * 1.05 + 1e-12;
  }
  // Effective smooth gradient below is D^T(DZ - Y) (half of the true one),
  // so step 1/L with L >= lambda_max(D^T D) is a valid 1/(2*Lip) step.
  const double thr = alpha / (2.0 * L);
  const Eigen::MatrixXd DtY = D.transpose() * Y;

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, M);
  Eigen::MatrixXd Z = C;
  double t = 1.0;
  double f_prev = lasso_objective(D, Y, C, alpha);
  int iters = 0;

  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd grad = D.transpose() * (D * Z) - DtY;
    Eigen::MatrixXd Cn = soft_threshold(Z - grad / L, thr);
    double f_new = lasso_objective(D, Y, Cn, alpha);
    if (f_new > f_prev) {
      // Accelerated candidate overshot; take a plain proximal step from the
      // last accepted iterate (guaranteed non-increasing) and reset momentum.
      grad = D.transpose() * (D * C) - DtY;
      Cn = soft_threshold(C - grad / L, thr);
      f_new = lasso_objective(D, Y, Cn, alpha);
      if (f_new > f_prev) break;  // floating-point plateau
      t = 1.0;
      Z = Cn;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      Z = Cn + ((t - 1.0) / t_next) * (Cn - C);
      t = t_next;
    }
    C = Cn;
    ++iters;
    const double delta = f_prev - f_new;
    f_prev = f_new;
    if (delta < tol * std::max(f_prev, 1e-30)) break;
  }
  if (stats) {
    stats->objective = f_prev;
    stats->iterations = iters;
  }
  return C;
}

AtomicCode encode_lasso(const DynDictionary& dict, const FeatureSequence& seq,
                        double alpha, int max_iter, double tol,
                        LassoStats* stats) {
  if (seq.rows() != dict.num_rows)
    throw std::invalid_argument("sequence rows do not match dictionary rows");
  AtomicCode code;
  code.matrix = lasso_solve(dict.matrix, seq, alpha, max_iter, tol, stats);
  code.producing_dictionary_rows = dict.num_rows;
  return code;
}

AtomicCode min_norm_code(const DynDictionary& dict,
                         const std::vector<int>& selection,
                         const Eigen::MatrixXd& seq_rows, double jitter) {
  check_selection(selection, dict.num_rows);
  if (jitter < 0.0) throw std::invalid_argument("jitter must be nonnegative");
  const int r = static_cast<int>(selection.size());
  if (seq_rows.rows() != r)
    throw std::invalid_argument("seq_rows must have one row per selected frame");

  Eigen::MatrixXd Dr(r, dict.matrix.cols());
  for (int i = 0; i < r; ++i) Dr.row(i) = dict.matrix.row(selection[i]);

  Eigen::MatrixXd A = Dr * Dr.transpose();
  A.diagonal().array() += jitter;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  const Eigen::VectorXd dv = ldlt.vectorD().cwiseAbs();
  if (jitter == 0.0 &&
      (ldlt.info() != Eigen::Success ||
       dv.minCoeff() <= 1e-12 * std::max(dv.maxCoeff(), 1e-300)))
    throw std::runtime_error(
        "key-row system D_r*D_r^T is numerically singular; pass a positive "
        "jitter to regularize");

  AtomicCode code;
  code.matrix = Dr.transpose() * ldlt.solve(seq_rows);
  code.producing_dictionary_rows = dict.num_rows;
  return code;
}

AtomicCode min_norm_code(const DynDictionary& dict, const Indicator& selection,
                         const Eigen::MatrixXd& seq_rows, double jitter) {
  return min_norm_code(dict, selection.binarize(), seq_rows, jitter);
}

FeatureSequence decode(const DynDictionary& dict, const AtomicCode& code) {
  if (code.producing_dictionary_rows != dict.num_rows)
    throw std::invalid_argument(
        "code was produced for a different dictionary horizon (" +
        std::to_string(code.producing_dictionary_rows) + " rows vs " +
        std::to_string(dict.num_rows) + ")");
  if (code.matrix.rows() != dict.matrix.cols())
    throw std::invalid_argument("code atom count does not match dictionary");
  return dict.matrix * code.matrix;
}

}  // namespace dynkey
