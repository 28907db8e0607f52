#include "dynkey/selector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynkey/rng.hpp"

namespace dynkey {

namespace {

void check_loss_inputs(const DynDictionary& dict, const FeatureSequence& seq,
                       const Eigen::VectorXd& s, double rho) {
  if (seq.rows() != dict.num_rows)
    throw std::invalid_argument("sequence rows do not match dictionary rows");
  if (s.size() != dict.num_rows)
    throw std::invalid_argument("indicator length does not match frame count");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if ((s.array() < -1e-12).any() || (s.array() > 1.0 + 1e-12).any())
    throw std::invalid_argument("indicator entries must lie in [0, 1]");
}

// A = I + rho^-1 * G * diag(s)
Eigen::MatrixXd loss_system(const DynDictionary& dict, const Eigen::VectorXd& s,
                            double rho) {
  Eigen::MatrixXd A = dict.gram * s.asDiagonal();
  A /= rho;
  A.diagonal().array() += 1.0;
  return A;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LossParts loss(const DynDictionary& dict, const FeatureSequence& seq,
               const Eigen::VectorXd& s, double lambda, double rho) {
  check_loss_inputs(dict, seq, s, rho);
  const Eigen::MatrixXd A = loss_system(dict, s, rho);
  const Eigen::MatrixXd X = A.partialPivLu().solve(seq);
  LossParts out;
  out.recovery = X.squaredNorm();
  out.count = s.sum();
  out.total = out.recovery + lambda * out.count;
  return out;
}

Eigen::VectorXd loss_gradient(const DynDictionary& dict,
                              const FeatureSequence& seq,
                              const Eigen::VectorXd& s, double lambda,
                              double rho) {
  check_loss_inputs(dict, seq, s, rho);
  const Eigen::MatrixXd A = loss_system(dict, s, rho);
  const Eigen::MatrixXd X = A.partialPivLu().solve(seq);
  // d recovery / d s_i = -(2/rho) * sum_m X(i,m) * (G * A^-T X)(i,m)
  const Eigen::MatrixXd W =
      Eigen::MatrixXd(A.transpose()).partialPivLu().solve(X);
  const Eigen::MatrixXd GW = dict.gram * W;
  Eigen::VectorXd grad =
      Eigen::VectorXd::Constant(dict.num_rows, lambda) -
      (2.0 / rho) * (X.array() * GW.array()).rowwise().sum().matrix();
  return grad;
}

double recovery_for_selection(const DynDictionary& dict,
                              const FeatureSequence& seq,
                              const std::vector<int>& selection, double rho) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dict.num_rows);
  for (int i : selection) {
    if (i < 0 || i >= dict.num_rows)
      throw std::invalid_argument("selection index out of range");
    s[i] = 1.0;
  }
  return loss(dict, seq, s, 0.0, rho).recovery;
}

std::pair<Indicator, SelectDiagnostics> select_keyframes(
    const DynDictionary& dict, const FeatureSequence& seq,
    const SelectorConfig& cfg) {
  if (seq.rows() != dict.num_rows)
    throw std::invalid_argument("sequence rows do not match dictionary rows");
  if (!(cfg.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (cfg.alpha_growth < 0.0)
    throw std::invalid_argument("alpha_growth must be nonnegative");
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
    throw std::invalid_argument("threshold must lie in (0, 1)");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  const int T = dict.num_rows;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(T);  // logits; s = sigmoid(a*x)
  Eigen::VectorXd s(T);
  SelectDiagnostics diag;
  diag.loss_trace.reserve(cfg.max_iter);

  double a = cfg.alpha_start;
  for (int it = 0; it < cfg.max_iter; ++it) {
    a = cfg.alpha_start + it * cfg.alpha_growth;
    for (int i = 0; i < T; ++i)
      s[i] = sigmoid(std::clamp(a * x[i], -500.0, 500.0));
    const LossParts parts = loss(dict, seq, s, cfg.lambda, cfg.rho);
    diag.loss_trace.push_back(parts.total);
    if (!std::isfinite(parts.total))
      throw SelectorDivergence(
          "selection loss became non-finite at iteration " +
              std::to_string(it),
          diag.loss_trace);
    const Eigen::VectorXd gs =
        loss_gradient(dict, seq, s, cfg.lambda, cfg.rho);
    // chain rule through s = sigmoid(a*x)
    x -= cfg.learning_rate *
         (gs.array() * (a * s.array() * (1.0 - s.array()))).matrix();
    ++diag.iterations;
  }
  diag.final_alpha = a;
  for (int i = 0; i < T; ++i)
    s[i] = sigmoid(std::clamp(a * x[i], -500.0, 500.0));

  Indicator ind;
  ind.values = s;
  ind.threshold = cfg.threshold;
  // Selection must be non-empty whenever the sequence carries any energy.
  if (ind.binarize().empty() && seq.norm() > 0.0) {
    int best = 0;
    for (int i = 1; i < T; ++i)
      if (s[i] > s[best]) best = i;
    ind.values[best] = 1.0;
  }
  return {ind, diag};
}

std::pair<std::vector<int>, double> brute_force_select(
    const DynDictionary& dict, const FeatureSequence& seq, int r, double rho,
    std::uint64_t budget) {
  const int T = dict.num_rows;
  if (r < 1 || r > T) throw std::invalid_argument("r must lie in [1, T]");
  // C(T, r) with overflow clamp
  double combos = 1.0;
  for (int i = 0; i < r; ++i) combos *= static_cast<double>(T - i) / (i + 1);
  if (combos > static_cast<double>(budget))
    throw std::runtime_error(
        "brute_force_select: C(" + std::to_string(T) + ", " +
        std::to_string(r) + ") exceeds the evaluation budget; use "
        "sampled_select instead");

  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  std::vector<int> best = idx;
  double best_rec = recovery_for_selection(dict, seq, idx, rho);
  // lexicographic enumeration; strict '<' keeps the first (smallest) tie
  while (true) {
    int pos = r - 1;
    while (pos >= 0 && idx[pos] == T - r + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    const double rec = recovery_for_selection(dict, seq, idx, rho);
    if (rec < best_rec) {
      best_rec = rec;
      best = idx;
    }
  }
  return {best, best_rec};
}

std::pair<std::vector<int>, double> sampled_select(const DynDictionary& dict,
                                                   const FeatureSequence& seq,
                                                   int r, double rho, int n,
                                                   std::uint64_t seed) {
  const int T = dict.num_rows;
  if (r < 1 || r > T) throw std::invalid_argument("r must lie in [1, T]");
  if (n < 1) throw std::invalid_argument("need at least one draw");
  Rng rng(substream_seed(seed, 0x73616d70));  // "samp"
  std::vector<int> pool(T);
  std::vector<int> best;
  double best_rec = 0.0;
  for (int d = 0; d < n; ++d) {
    // partial Fisher-Yates for an r-subset without replacement
    for (int i = 0; i < T; ++i) pool[i] = i;
    std::vector<int> pick(r);
    for (int i = 0; i < r; ++i) {
      const int j = i + static_cast<int>(rng.below(T - i));
      std::swap(pool[i], pool[j]);
      pick[i] = pool[i];
    }
    std::sort(pick.begin(), pick.end());
    const double rec = recovery_for_selection(dict, seq, pick, rho);
    if (d == 0 || rec < best_rec) {
      best_rec = rec;
      best = pick;
    }
  }
  return {best, best_rec};
}

std::vector<int> uniform_select(int num_rows, int r) {
  if (r < 1 || r > num_rows)
    throw std::invalid_argument("r must lie in [1, T]");
  std::vector<int> out;
  if (r == 1) {
    out.push_back(0);
    return out;
  }
  for (int i = 0; i < r; ++i)
    out.push_back(static_cast<int>(
        std::lround(static_cast<double>(i) * (num_rows - 1) / (r - 1))));
  return out;
}

Indicator baseline_select(const BaselineSpec& spec, const DynDictionary& dict,
                          const FeatureSequence& seq, int r) {
  std::vector<int> sel;
  if (spec.kind == BaselineKind::Uniform) {
    sel = uniform_select(dict.num_rows, r);
  } else {
    sel = sampled_select(dict, seq, r, spec.rho, spec.n, spec.seed).first;
  }
  Indicator ind;
  ind.values = Eigen::VectorXd::Zero(dict.num_rows);
  for (int i : sel) ind.values[i] = 1.0;
  return ind;
}

}  // namespace dynkey
