#pragma once
// Atomic-code solvers: lasso encoding (accelerated proximal gradient with a
// monotonicity guard) and the closed-form minimum-Frobenius-norm code for a
// selected row subset.

#include <vector>

#include "dynkey/dictionary.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

struct AtomicCode {
  Eigen::MatrixXd matrix;  // N x M
  int producing_dictionary_rows = 0;
};

struct LassoStats {
  double objective = 0.0;
  int iterations = 0;
};

// ||Y - D*C||_F^2 + alpha * sum|C_ij|
double lasso_objective(const Eigen::MatrixXd& dict_matrix,
                       const Eigen::MatrixXd& seq,
                       const Eigen::MatrixXd& code, double alpha);

// FISTA with step 1/L (L from the Gram spectrum) and an ISTA fallback that
// keeps the objective non-increasing across accepted iterates. Stops when
// the relative objective change drops below tol.
Eigen::MatrixXd lasso_solve(const Eigen::MatrixXd& dict_matrix,
                            const Eigen::MatrixXd& seq, double alpha,
                            int max_iter, double tol,
                            LassoStats* stats = nullptr);

AtomicCode encode_lasso(const DynDictionary& dict, const FeatureSequence& seq,
                        double alpha = 0.1, int max_iter = 100,
                        double tol = 1e-6, LassoStats* stats = nullptr);

// Minimum-Frobenius-norm C with D_r*C = Y_r: C = D_r^T (D_r D_r^T + jI)^-1 Y_r.
// jitter = 0 fails loudly on a singular key-row system.
AtomicCode min_norm_code(const DynDictionary& dict,
                         const std::vector<int>& selection,
                         const Eigen::MatrixXd& seq_rows, double jitter = 0.0);

AtomicCode min_norm_code(const DynDictionary& dict, const Indicator& selection,
                         const Eigen::MatrixXd& seq_rows, double jitter = 0.0);

FeatureSequence decode(const DynDictionary& dict, const AtomicCode& code);

}  // namespace dynkey
