#include "dynkey/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "dynkey/hpim.hpp"
#include "dynkey/metrics.hpp"
#include "dynkey/rng.hpp"

namespace dynkey {

namespace {

// Sequences are independent; results land in per-index slots so scheduling
// cannot affect the report.
void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::max(
      1, std::min(n, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

double combinations(int n, int r) {
  double c = 1.0;
  for (int i = 0; i < r; ++i) c *= static_cast<double>(n - i) / (i + 1);
  return c;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double hpim_pck(const DynDictionary& dict, const FeatureSequence& seq,
                const std::vector<int>& sel) {
  const SkeletonSequence gt = as_skeleton(seq);
  Eigen::MatrixXd keys(static_cast<int>(sel.size()), seq.cols());
  for (std::size_t i = 0; i < sel.size(); ++i)
    keys.row(static_cast<int>(i)) = seq.row(sel[i]);
  SkeletonSequence recon = interpolate(dict, sel, keys);
  recon.bbox = gt.bbox;
  recon.visibility = gt.visibility;
  return eval_pck(recon, gt).overall;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("spearman needs two equal series of >= 2");
  const int n = static_cast<int>(xs.size());
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> rk(n);
    int i = 0;
    while (i < n) {
      int j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (i + j) + 1.0;  // average rank for ties
      for (int k = i; k <= j; ++k) rk[order[k]] = avg;
      i = j + 1;
    }
    return rk;
  };
  const std::vector<double> rx = ranks(xs), ry = ranks(ys);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  const double denom = std::sqrt(dx * dy);
  return denom > 0.0 ? num / denom : 0.0;
}

Table2Report bench_table2(const SynthCorpus& corpus, const DynDictionary& dict,
                          const BenchSelectorConfig& cfg) {
  const int n = static_cast<int>(corpus.sequences.size());
  if (n == 0) throw std::invalid_argument("empty corpus");
  Table2Report rep;
  rep.config = cfg;
  rep.rows.resize(n);

  parallel_for(n, [&](int i) {
    const FeatureSequence& y = corpus.sequences[i];
    Table2Row row;
    row.seq = i;
    row.nonstationary = corpus.truth[i].nonstationary;
    const SelectorConfig scfg = resolve_selector(
        cfg.base, cfg.lambda_scale, cfg.rho_scale, dict, y);
    const std::vector<int> sel =
        select_keyframes(dict, y, scfg).first.binarize();
    const int r = static_cast<int>(sel.size());
    row.cardinality = r;
    row.recovery_selected = recovery_for_selection(dict, y, sel, scfg.rho);
    const std::vector<int> uni = uniform_select(dict.num_rows, r);
    row.recovery_uniform = recovery_for_selection(dict, y, uni, scfg.rho);
    row.recovery_random =
        sampled_select(dict, y, r, scfg.rho, cfg.n_random,
                       substream_seed(cfg.seed, static_cast<std::uint64_t>(i)))
            .second;
    if (combinations(dict.num_rows, r) <=
        static_cast<double>(cfg.brute_budget)) {
      row.brute_available = true;
      row.recovery_brute =
          brute_force_select(dict, y, r, scfg.rho, cfg.brute_budget).second;
    }
    if (cfg.with_pck && y.cols() % 2 == 0) {
      row.pck_selected = hpim_pck(dict, y, sel);
      row.pck_uniform = hpim_pck(dict, y, uni);
    }
    rep.rows[i] = row;
  });

  int brute_n = 0, brute_ok = 0, nonstat_n = 0, beats = 0;
  double card = 0.0;
  for (const Table2Row& row : rep.rows) {
    card += row.cardinality;
    if (row.brute_available) {
      ++brute_n;
      if (row.recovery_selected <= 1.5 * row.recovery_brute) ++brute_ok;
    }
    if (row.nonstationary) {
      ++nonstat_n;
      if (row.recovery_selected < row.recovery_uniform) ++beats;
    }
  }
  rep.mean_cardinality = card / n;
  rep.frac_within_1p5_brute =
      brute_n ? static_cast<double>(brute_ok) / brute_n : 0.0;
  rep.frac_beats_uniform_nonstat =
      nonstat_n ? static_cast<double>(beats) / nonstat_n : 0.0;
  return rep;
}

std::string Table2Report::to_csv() const {
  std::string out =
      "seq,cardinality,recovery_selected,recovery_uniform,recovery_random,"
      "recovery_brute,brute_available,nonstationary,pck_selected,pck_uniform\n";
  for (const Table2Row& r : rows) {
    out += std::to_string(r.seq) + "," + std::to_string(r.cardinality) + "," +
           fmt(r.recovery_selected) + "," + fmt(r.recovery_uniform) + "," +
           fmt(r.recovery_random) + "," + fmt(r.recovery_brute) + "," +
           (r.brute_available ? "1" : "0") + "," +
           (r.nonstationary ? "1" : "0") + "," + fmt(r.pck_selected) + "," +
           fmt(r.pck_uniform) + "\n";
  }
  return out;
}

SynthCorpus pinned_table2_corpus(std::uint64_t seed) {
  SynthSpec spec;  // T=8, M=6, 2 pairs, mag [0.9, 1.05], noise 0.02
  spec.changepoint = 4;
  return synth_corpus(spec, seed);
}

DynDictionary pinned_table2_dictionary() {
  return build_dictionary(init_pole_ring(16, 0.85, 1.15, 7), 8, true);
}

PoleSet pinned_online_poles() {
  PoleSet ps = init_pole_ring(72, 0.85, 1.15, 11);
  // Slow, near-unit-circle pairs the streaming corpus is generated from:
  // pool A = the first 8, pool B = the last 8 (disjoint dynamics for
  // changepoints). Phases visit the grid in stride-7 order so neighbouring
  // pool entries are not neighbouring frequencies.
  for (int i = 0; i < 16; ++i) {
    Pole p;
    p.kind = PoleKind::Complex;
    p.mag = 0.96 + 0.08 * i / 15.0;
    p.phase = 0.08 + 0.37 * ((7 * i) % 16) / 15.0;
    ps.poles.push_back(p);
  }
  return ps;
}

SynthCorpus pinned_online_corpus(std::uint64_t seed) {
  const PoleSet ps = pinned_online_poles();
  const int slow_base = 72;  // index of the first slow pair
  SynthCorpus corpus;
  corpus.seed = seed;
  corpus.spec.num_seqs = 40;
  corpus.spec.num_rows = 40;
  corpus.spec.num_features = 8;
  corpus.spec.pole_pairs = 2;
  corpus.spec.noise_sigma = 0.005;
  corpus.spec.noise_relative = true;
  corpus.spec.changepoint = 20;

  auto pick_two = [&](Rng& rng, int pool_offset) {
    const int a = static_cast<int>(rng.below(8));
    int b = static_cast<int>(rng.below(7));
    if (b >= a) ++b;
    return std::vector<Pole>{ps.poles[slow_base + pool_offset + a],
                             ps.poles[slow_base + pool_offset + b]};
  };

  for (int i = 0; i < corpus.spec.num_seqs; ++i) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(i) + 1));
    SynthTruth t;
    t.nonstationary = (i % 2 == 1);
    t.changepoint = t.nonstationary ? corpus.spec.changepoint : -1;
    t.poles_a = pick_two(rng, 0);
    t.coeffs_a = Eigen::MatrixXd(4, corpus.spec.num_features);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < corpus.spec.num_features; ++c)
        t.coeffs_a(r, c) = rng.normal();
    if (t.nonstationary) {
      t.poles_b = pick_two(rng, 8);
      t.coeffs_b = Eigen::MatrixXd(4, corpus.spec.num_features);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < corpus.spec.num_features; ++c)
          t.coeffs_b(r, c) = rng.normal();
    }
    FeatureSequence y =
        regenerate(t, corpus.spec.num_rows, corpus.spec.num_features);
    const double sigma =
        corpus.spec.noise_sigma *
        std::sqrt(y.squaredNorm() / (static_cast<double>(y.rows()) * y.cols()));
    for (int k = 0; k < y.rows(); ++k)
      for (int m = 0; m < y.cols(); ++m) y(k, m) += sigma * rng.normal();
    corpus.sequences.push_back(std::move(y));
    corpus.truth.push_back(std::move(t));
  }
  return corpus;
}

namespace {

OnlineBenchPoint eval_online_point(const SynthCorpus& corpus,
                                   const OnlineBenchConfig& cfg, int warmup,
                                   int horizon) {
  const int n = static_cast<int>(corpus.sequences.size());
  const DynDictionary dict_h =
      build_dictionary(cfg.poles, horizon, cfg.normalize);
  const DynDictionary dict_w =
      build_dictionary(cfg.poles, warmup, cfg.normalize);

  std::vector<double> rec_b(n), rec_o(n), cnt_b(n), cnt_o(n), pck_b(n),
      pck_o(n);
  parallel_for(n, [&](int i) {
    const FeatureSequence y = corpus.sequences[i].topRows(horizon);
    const SelectorConfig scfg = resolve_selector(
        cfg.sel.base, cfg.sel.lambda_scale, cfg.sel.rho_scale, dict_h, y);
    const std::vector<int> sb =
        select_keyframes(dict_h, y, scfg).first.binarize();
    rec_b[i] = recovery_for_selection(dict_h, y, sb, scfg.rho);
    cnt_b[i] = static_cast<double>(sb.size());

    OnlineConfig oc;
    oc.selector = cfg.sel.base;
    oc.lambda_scale = cfg.sel.lambda_scale;
    oc.rho_scale = cfg.sel.rho_scale;
    oc.tau = cfg.tau;
    oc.code_alpha = cfg.code_alpha;
    oc.code_max_iter = cfg.code_max_iter;
    oc.code_tol = cfg.code_tol;
    OnlineState st = init_online(dict_w, y.topRows(warmup), oc);
    for (int t = warmup; t < horizon; ++t)
      step(st, y.row(t).transpose());
    rec_o[i] = recovery_for_selection(dict_h, y, st.selected, scfg.rho);
    cnt_o[i] = static_cast<double>(st.selected.size());

    if (cfg.sel.with_pck && y.cols() % 2 == 0) {
      pck_b[i] = hpim_pck(dict_h, y, sb);
      pck_o[i] = st.selected.empty() ? 0.0 : hpim_pck(dict_h, y, st.selected);
    }
  });

  auto mean = [n](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / n;
  };
  OnlineBenchPoint pt;
  pt.warmup = warmup;
  pt.batch_recovery = mean(rec_b);
  pt.online_recovery = mean(rec_o);
  pt.batch_count = mean(cnt_b);
  pt.online_count = mean(cnt_o);
  pt.recovery_delta = (pt.online_recovery - pt.batch_recovery) /
                      std::max(pt.batch_recovery, 1e-30);
  pt.count_delta = std::abs(pt.online_count - pt.batch_count);
  pt.batch_pck = mean(pck_b);
  pt.online_pck = mean(pck_o);
  return pt;
}

}  // namespace

OnlineBenchReport bench_online(const SynthCorpus& corpus,
                               const OnlineBenchConfig& cfg, int T_b,
                               int T_o) {
  if (corpus.sequences.empty()) throw std::invalid_argument("empty corpus");
  const int T = static_cast<int>(corpus.sequences.front().rows());
  if (T_b < 2 || T_o < 0 || T_b + T_o > T)
    throw std::invalid_argument("need 2 <= T_b and T_b + T_o <= corpus rows");
  const int horizon = T_b + T_o;

  OnlineBenchReport rep;
  rep.config = cfg;
  rep.T_b = T_b;
  rep.T_o = T_o;
  rep.main = eval_online_point(corpus, cfg, T_b, horizon);

  std::vector<double> ws, deltas;
  for (int w : cfg.warmup_grid) {
    if (w < 2 || w > horizon) continue;
    const OnlineBenchPoint pt =
        (w == T_b) ? rep.main : eval_online_point(corpus, cfg, w, horizon);
    rep.sweep.push_back(pt);
    ws.push_back(static_cast<double>(w));
    deltas.push_back(pt.recovery_delta);
  }
  rep.sweep_spearman = ws.size() >= 2 ? spearman(ws, deltas) : 0.0;
  return rep;
}

std::string OnlineBenchReport::to_csv() const {
  std::string out =
      "warmup,batch_recovery,online_recovery,recovery_delta,batch_count,"
      "online_count,count_delta,batch_pck,online_pck\n";
  for (const OnlineBenchPoint& p : sweep) {
    out += std::to_string(p.warmup) + "," + fmt(p.batch_recovery) + "," +
           fmt(p.online_recovery) + "," + fmt(p.recovery_delta) + "," +
           fmt(p.batch_count) + "," + fmt(p.online_count) + "," +
           fmt(p.count_delta) + "," + fmt(p.batch_pck) + "," +
           fmt(p.online_pck) + "\n";
  }
  return out;
}

}  // namespace dynkey
