#pragma once
// Streaming key-frame detection: warm-up batch selection on a prefix, then
// one-step-ahead feature prediction from the keys through the row-extended
// dictionary; a frame is admitted as a key when its relative prediction
// residual exceeds tau.

#include "dynkey/dictionary.hpp"
#include "dynkey/selector.hpp"
#include "dynkey/sparse_coding.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

struct OnlineConfig {
  SelectorConfig selector;       // warm-up batch selection
  double lambda_scale = -1.0;    // > 0: resolve lambda/rho from data scale
  double rho_scale = -1.0;       //      (see resolve_selector)
  double tau = 0.15;             // relative-residual admission threshold
  // Code used for prediction. code_alpha = 0 reproduces the exact
  // minimum-norm key-row code; > 0 uses the lasso code, which extrapolates
  // far better on overcomplete dictionaries.
  double code_alpha = 0.0;
  int code_max_iter = 400;
  double code_tol = 1e-8;
  double jitter = 0.0;           // min-norm path regularization
};

struct OnlineState {
  DynDictionary dict;          // grown to the frames seen so far
  std::vector<int> selected;   // key-frame indices into the stream
  Eigen::MatrixXd key_rows;    // r x M cached selected feature rows
  double tau = 0.15;
  OnlineConfig cfg;
  Eigen::MatrixXd history;     // every frame seen (t x M)
};

// seq_prefix must have dict.num_rows rows (>= 2). A zero prefix yields an
// empty initial selection.
OnlineState init_online(const DynDictionary& dict,
                        const FeatureSequence& seq_prefix,
                        const OnlineConfig& cfg);

// One-step-ahead prediction of frame t from the current keys. Requires at
// least one key.
Eigen::VectorXd predict_next(const OnlineState& state);

struct StepInfo {
  double residual = 0.0;  // ||incoming - prediction|| / max(||incoming||, eps)
  Eigen::VectorXd prediction;
};

// Appends the frame to the horizon (dictionary grows one row either way) and
// admits it as a key iff the relative residual exceeds tau.
bool step(OnlineState& state, const Eigen::VectorXd& incoming,
          StepInfo* info = nullptr);

}  // namespace dynkey
