#include "dynkey/dict_learning.hpp"

#include <algorithm>
#include <cmath>

#include "dynkey/rng.hpp"
#include "dynkey/sparse_coding.hpp"

namespace dynkey {

namespace {

// Cold-solve settings shared by training epochs and evaluate_dictionary so
// the final trace entry and a held-out evaluation are bit-comparable.
constexpr int kCodeIters = 500;
constexpr double kCodeTol = 1e-10;

void check_corpus(const std::vector<FeatureSequence>& corpus) {
  for (const FeatureSequence& y : corpus)
    if (y.rows() != corpus.front().rows())
      throw std::invalid_argument("corpus sequences must share a row count");
}

double mean_objective(const PoleSet& poles, int rows,
                      const std::vector<FeatureSequence>& corpus,
                      double alpha) {
  const DynDictionary dict = build_dictionary(poles, rows, false);
  double total = 0.0;
  for (const FeatureSequence& y : corpus) {
    LassoStats st;
    lasso_solve(dict.matrix, y, alpha, kCodeIters, kCodeTol, &st);
    total += st.objective;
  }
  return total / static_cast<double>(corpus.size());
}

// Residual-weighted objective with codes held fixed (backtracking surrogate).
double fixed_code_objective(const PoleSet& poles, int rows,
                            const std::vector<FeatureSequence>& corpus,
                            const std::vector<Eigen::MatrixXd>& codes,
                            double alpha) {
  const DynDictionary dict = build_dictionary(poles, rows, false);
  double total = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    total += lasso_objective(dict.matrix, corpus[i], codes[i], alpha);
  return total / static_cast<double>(corpus.size());
}

PoleSet apply_step(const PoleSet& poles,
                   const std::vector<std::pair<double, double>>& grad,
                   double step) {
  PoleSet out = poles;
  for (std::size_t i = 0; i < out.poles.size(); ++i) {
    Pole& p = out.poles[i];
    p.mag = std::max(p.mag - step * grad[i].first, 1e-6);
    if (p.kind == PoleKind::Complex)
      p.phase = std::clamp(p.phase - step * grad[i].second, 1e-6, kPi - 1e-6);
  }
  // Nudge apart any collision the step created; keeps PoleSet invariants.
  for (std::size_t i = 0; i < out.poles.size(); ++i)
    for (std::size_t j = i + 1; j < out.poles.size(); ++j) {
      Pole& a = out.poles[i];
      const Pole& b = out.poles[j];
      while (a.kind == b.kind && std::abs(a.mag - b.mag) < 1e-12 &&
             std::abs(a.phase - b.phase) < 1e-12)
        a.mag += 1e-9;
    }
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> pole_gradient(
    const PoleSet& poles, int num_rows, const Eigen::MatrixXd& dLdD) {
  if (dLdD.rows() != num_rows || dLdD.cols() != atom_count(poles))
    throw std::invalid_argument("dLdD shape does not match the dictionary");
  std::vector<std::pair<double, double>> grad(poles.poles.size(), {0.0, 0.0});
  int col = poles.include_constant_atom ? 1 : 0;  // constant atom: no params
  for (std::size_t i = 0; i < poles.poles.size(); ++i) {
    const Pole& p = poles.poles[i];
    double gm = 0.0, gp = 0.0;
    if (p.kind == PoleKind::Real) {
      const double sign = (p.phase > kPi / 2) ? -1.0 : 1.0;
      for (int k = 1; k < num_rows; ++k) {
        // column value (sign*m)^k; d/dm = k * sign^k * m^(k-1)
        const double sk = (k % 2 == 0) ? 1.0 : sign;
        gm += dLdD(k, col) * k * sk * std::pow(p.mag, k - 1.0);
      }
      col += 1;
    } else {
      for (int k = 1; k < num_rows; ++k) {
        const double mk1 = std::pow(p.mag, k - 1.0);
        const double mk = mk1 * p.mag;
        const double c = std::cos(k * p.phase);
        const double s = std::sin(k * p.phase);
        gm += dLdD(k, col) * k * mk1 * c + dLdD(k, col + 1) * k * mk1 * s;
        gp += dLdD(k, col) * (-k * mk * s) + dLdD(k, col + 1) * (k * mk * c);
      }
      col += 2;
    }
    grad[i] = {gm, gp};
  }
  return grad;
}

TrainResult train_dictionary(const PoleSet& init,
                             const std::vector<FeatureSequence>& corpus,
                             double alpha, int epochs, double lr) {
  if (corpus.empty()) throw std::invalid_argument("training corpus is empty");
  check_corpus(corpus);
  if (epochs < 0) throw std::invalid_argument("epochs must be nonnegative");
  if (lr < 0.0) throw std::invalid_argument("learning rate must be nonnegative");
  validate_poles(init);
  const int rows = static_cast<int>(corpus.front().rows());
  if (rows < 2) throw std::invalid_argument("sequences need at least 2 rows");

  TrainResult res;
  res.poles = init;
  res.loss_trace.push_back(mean_objective(init, rows, corpus, alpha));
  const double initial = res.loss_trace.front();

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const DynDictionary dict = build_dictionary(res.poles, rows, false);

    // E-step: codes under the current poles.
    std::vector<Eigen::MatrixXd> codes;
    codes.reserve(corpus.size());
    Eigen::MatrixXd dLdD =
        Eigen::MatrixXd::Zero(rows, dict.matrix.cols());
    for (const FeatureSequence& y : corpus) {
      codes.push_back(
          lasso_solve(dict.matrix, y, alpha, kCodeIters, kCodeTol));
      dLdD += -2.0 * (y - dict.matrix * codes.back()) *
              codes.back().transpose();
    }
    dLdD /= static_cast<double>(corpus.size());

    // M-step: projected gradient on the poles with backtracking on the
    // fixed-code surrogate.
    if (lr > 0.0) {
      const auto grad = pole_gradient(res.poles, rows, dLdD);
      const double f0 =
          fixed_code_objective(res.poles, rows, corpus, codes, alpha);
      double step = lr;
      for (int half = 0; half < 30; ++half) {
        const PoleSet cand = apply_step(res.poles, grad, step);
        if (fixed_code_objective(cand, rows, corpus, codes, alpha) <= f0) {
          res.poles = cand;
          break;
        }
        step *= 0.5;
      }
    }

    res.loss_trace.push_back(mean_objective(res.poles, rows, corpus, alpha));
    if (!(res.loss_trace.back() <= 10.0 * std::max(initial, 1e-30)) ||
        !std::isfinite(res.loss_trace.back()))
      throw TrainDivergence(
          "training diverged at epoch " + std::to_string(epoch) +
              " (objective exceeded 10x its initial value)",
          res.loss_trace);
  }
  return res;
}

double evaluate_dictionary(const PoleSet& poles,
                           const std::vector<FeatureSequence>& corpus,
                           double alpha) {
  if (corpus.empty()) return 0.0;
  check_corpus(corpus);
  validate_poles(poles);
  return mean_objective(poles, static_cast<int>(corpus.front().rows()), corpus,
                        alpha);
}

}  // namespace dynkey
