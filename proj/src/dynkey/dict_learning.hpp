#pragma once
// Pole learning by alternating minimization: lasso codes with poles fixed,
// then a projected gradient step on (magnitude, phase) with backtracking.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dynkey/dictionary.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

struct TrainResult {
  PoleSet poles;
  std::vector<double> loss_trace;  // mean corpus objective; epochs+1 entries
};

struct TrainDivergence : std::runtime_error {
  TrainDivergence(const std::string& what, std::vector<double> trace_in)
      : std::runtime_error(what), trace(std::move(trace_in)) {}
  std::vector<double> trace;
};

// Gradient of the summed reconstruction objective w.r.t. each pole's
// (magnitude, phase), given dL/dD. Real poles have no phase parameter
// (second component 0). Exposed for finite-difference verification.
std::vector<std::pair<double, double>> pole_gradient(
    const PoleSet& poles, int num_rows, const Eigen::MatrixXd& dLdD);

// All sequences must share the row count. Aborts with the trace when the
// mean objective exceeds 10x its initial value.
TrainResult train_dictionary(const PoleSet& init,
                             const std::vector<FeatureSequence>& corpus,
                             double alpha = 0.1, int epochs = 50,
                             double lr = 1e-3);

// Mean lasso objective of the corpus under the poles' dictionary (cold
// solve, same encoder settings as training). Empty corpus -> 0.
double evaluate_dictionary(const PoleSet& poles,
                           const std::vector<FeatureSequence>& corpus,
                           double alpha = 0.1);

}  // namespace dynkey
