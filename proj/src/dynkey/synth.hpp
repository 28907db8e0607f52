#pragma once
// Seeded synthetic corpora: sequences generated from sampled pole atoms with
// sparse coefficients, optional additive noise, and optional mid-sequence
// dynamics changes. Ground truth (poles, codes) travels with the data so
// oracle tests can check exactness.

#include <cstdint>
#include <vector>

#include "dynkey/dictionary.hpp"
#include "dynkey/hpim.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

struct SynthSpec {
  int num_seqs = 50;
  int num_rows = 8;       // T
  int num_features = 6;   // M (2J when interpreted as skeleton x/y pairs)
  int pole_pairs = 2;     // complex pairs generating each sequence
  double mag_lo = 0.9;
  double mag_hi = 1.05;
  double phase_lo = 0.0;  // phases drawn uniform on the open interval
  double phase_hi = 3.14159265358979323846;
  double noise_sigma = 0.02;
  bool noise_relative = false;  // sigma scales the sequence RMS when set
  // >= 1: odd-indexed sequences switch to fresh poles at this frame
  // (the impulse response restarts there)
  int changepoint = -1;
};

struct SynthTruth {
  std::vector<Pole> poles_a;
  std::vector<Pole> poles_b;  // post-changepoint system (empty if stationary)
  Eigen::MatrixXd coeffs_a;   // per-atom-column coefficients
  Eigen::MatrixXd coeffs_b;
  bool nonstationary = false;
  int changepoint = -1;
};

struct SynthCorpus {
  std::vector<FeatureSequence> sequences;
  std::vector<SynthTruth> truth;
  SynthSpec spec;
  std::uint64_t seed = 0;
};

SynthCorpus synth_corpus(const SynthSpec& spec, std::uint64_t seed);

// Noiseless regeneration of a sequence from its recorded ground truth.
FeatureSequence regenerate(const SynthTruth& t, int num_rows, int num_features);

// A synthetic corpus viewed as skeletons: coords = features (must be even
// width), full visibility, per-frame bbox = coordinate extent (floored to a
// unit box so PCK radii stay positive).
SkeletonSequence as_skeleton(const FeatureSequence& seq);

}  // namespace dynkey
