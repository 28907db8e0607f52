#pragma once
// Relaxed key-frame selection: the closed-form recovery loss on a soft
// indicator, its analytic gradient, the annealed-sigmoid optimizer, and the
// exact/baseline selectors used for validation.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynkey/dictionary.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

struct SelectorConfig {
  double lambda = 0.25;  // frame-count penalty; tuned on the synthetic corpus
                         // so the two loss terms sit near a 1:2 balance
  double rho = 1e-2;     // recovery perturbation
  double alpha_start = 1.0;
  double alpha_growth = 0.1;
  int max_iter = 500;
  double learning_rate = 0.05;
  double threshold = 0.5;
};

struct LossParts {
  double total = 0.0;
  double recovery = 0.0;
  double count = 0.0;  // sum of soft indicator entries
};

// recovery = ||(I + rho^-1 G diag(s))^-1 Y||_F^2, total = recovery + lambda*count.
LossParts loss(const DynDictionary& dict, const FeatureSequence& seq,
               const Eigen::VectorXd& s, double lambda, double rho);

Eigen::VectorXd loss_gradient(const DynDictionary& dict,
                              const FeatureSequence& seq,
                              const Eigen::VectorXd& s, double lambda,
                              double rho);

// Recovery term for a hard 0/1 selection (oracles and benches).
double recovery_for_selection(const DynDictionary& dict,
                              const FeatureSequence& seq,
                              const std::vector<int>& selection, double rho);

struct SelectDiagnostics {
  std::vector<double> loss_trace;  // total loss per iteration
  int iterations = 0;
  double final_alpha = 0.0;
};

// Thrown when the annealed optimization hits a non-finite loss; carries the
// trace accumulated so far.
struct SelectorDivergence : std::runtime_error {
  SelectorDivergence(const std::string& what, std::vector<double> trace_in)
      : std::runtime_error(what), trace(std::move(trace_in)) {}
  std::vector<double> trace;
};

std::pair<Indicator, SelectDiagnostics> select_keyframes(
    const DynDictionary& dict, const FeatureSequence& seq,
    const SelectorConfig& cfg);

// Exhaustive argmin of the recovery term over r-subsets (ties resolve to the
// lexicographically smallest index set). Throws when C(T,r) exceeds budget.
std::pair<std::vector<int>, double> brute_force_select(
    const DynDictionary& dict, const FeatureSequence& seq, int r, double rho,
    std::uint64_t budget = 1000000);

// Best of n seeded random r-subsets.
std::pair<std::vector<int>, double> sampled_select(const DynDictionary& dict,
                                                   const FeatureSequence& seq,
                                                   int r, double rho, int n,
                                                   std::uint64_t seed);

enum class BaselineKind { Uniform, BestOfRandom };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::Uniform;
  int n = 100;             // BestOfRandom draws
  std::uint64_t seed = 0;  // BestOfRandom seed
  double rho = 1e-2;       // recovery evaluation for BestOfRandom
};

// uniform: indices round(i*(T-1)/(r-1)), i = 0..r-1 (r=1 -> {0}).
std::vector<int> uniform_select(int num_rows, int r);

Indicator baseline_select(const BaselineSpec& spec, const DynDictionary& dict,
                          const FeatureSequence& seq, int r);

}  // namespace dynkey
