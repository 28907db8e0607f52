#pragma once
// Benchmark protocols: selected-vs-baselines recovery comparison and the
// online-vs-batch agreement study, both on seeded synthetic corpora.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynkey/dictionary.hpp"
#include "dynkey/online.hpp"
#include "dynkey/selector.hpp"
#include "dynkey/synth.hpp"

namespace dynkey {

// Scaled-lambda/rho convention used by benches: lambda and rho are resolved
// per sequence from its energy and the dictionary's Gram scale (keeps the
// optimizer in its working regime across horizons and corpora).
struct BenchSelectorConfig {
  SelectorConfig base;
  double lambda_scale = 0.5;  // lambda = scale * ||Y||_F^2 / T
  double rho_scale = 1.0;     // rho = scale * mean diag G
  int n_random = 100;
  std::uint64_t seed = 0;
  std::uint64_t brute_budget = 1000000;
  bool with_pck = false;  // also score HPIM reconstructions (even M only)
};

struct Table2Row {
  int seq = 0;
  int cardinality = 0;
  double recovery_selected = 0.0;
  double recovery_uniform = 0.0;
  double recovery_random = 0.0;
  double recovery_brute = 0.0;
  bool brute_available = false;
  bool nonstationary = false;
  double pck_selected = 0.0;  // only when with_pck
  double pck_uniform = 0.0;
};

struct Table2Report {
  std::vector<Table2Row> rows;
  double frac_within_1p5_brute = 0.0;       // among rows with brute oracle
  double frac_beats_uniform_nonstat = 0.0;  // among nonstationary rows
  double mean_cardinality = 0.0;
  BenchSelectorConfig config;
  std::string to_csv() const;
};

Table2Report bench_table2(const SynthCorpus& corpus, const DynDictionary& dict,
                          const BenchSelectorConfig& cfg);

// The pinned selected-vs-baselines corpus and dictionary (T=8).
SynthCorpus pinned_table2_corpus(std::uint64_t seed = 17);
DynDictionary pinned_table2_dictionary();

struct OnlineBenchConfig {
  PoleSet poles;           // dictionary spec; built per horizon
  bool normalize = true;
  BenchSelectorConfig sel;
  double tau = 0.2;
  double code_alpha = 0.01;
  int code_max_iter = 400;
  double code_tol = 1e-8;
  std::vector<int> warmup_grid = {5, 10, 15, 20, 25, 30, 35};
};

struct OnlineBenchPoint {
  int warmup = 0;
  double batch_recovery = 0.0;   // corpus means
  double online_recovery = 0.0;
  double batch_count = 0.0;
  double online_count = 0.0;
  double recovery_delta = 0.0;   // (online - batch) / batch
  double count_delta = 0.0;      // |online - batch| mean key counts
  double batch_pck = 0.0;        // when sel.with_pck
  double online_pck = 0.0;
};

struct OnlineBenchReport {
  OnlineBenchPoint main;              // at the requested (T_b, T_o)
  std::vector<OnlineBenchPoint> sweep;  // warmup grid, same final horizon
  double sweep_spearman = 0.0;        // rank corr of warmup vs recovery_delta
  OnlineBenchConfig config;
  int T_b = 0, T_o = 0;
  std::string to_csv() const;  // warm-up sweep curve
};

OnlineBenchReport bench_online(const SynthCorpus& corpus,
                               const OnlineBenchConfig& cfg, int T_b, int T_o);

// The pinned streaming corpus (T=40, dictionary-representable slow dynamics,
// changepoint at frame 20 on odd sequences) and its dictionary spec.
SynthCorpus pinned_online_corpus(std::uint64_t seed = 101);
PoleSet pinned_online_poles();

// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace dynkey
