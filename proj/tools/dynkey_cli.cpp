// Command-line harness around the key-frame selection library. Every
// subcommand is seed-deterministic: the same flags and --seed produce
// byte-identical output files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dynkey/bench.hpp"
#include "dynkey/dict_learning.hpp"
#include "dynkey/hpim.hpp"
#include "dynkey/metrics.hpp"
#include "dynkey/online.hpp"
#include "dynkey/selector.hpp"
#include "dynkey/serialize.hpp"
#include "dynkey/sparse_coding.hpp"
#include "dynkey/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dynkey;

namespace {

struct Global {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out_dir = ".";

  json config;  // parsed --config document (empty object when absent)

  void load() {
    config = json::object();
    if (!config_path.empty()) config = json::parse(read_text(config_path));
    fs::create_directories(out_dir);
  }
  std::string out(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }
};

// Dictionary construction shared by subcommands: explicit JSON file wins,
// otherwise a ring spec (optionally seeded from --seed).
struct DictFlags {
  std::string dict_file;
  int rows = 0;  // 0: taken from the input sequence
  int pairs = 0; // 0: 2T (N = 4T columns)
  double ring_lo = 0.85, ring_hi = 1.15;
  std::uint64_t dict_seed = 0;
  bool no_const = false;
  bool normalize = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--dict", dict_file, "dictionary JSON file");
    cmd->add_option("--dict-rows", rows, "dictionary rows (default: input T)");
    cmd->add_option("--dict-pairs", pairs, "complex pairs (default: 2T)");
    cmd->add_option("--dict-ring-lo", ring_lo, "ring lower magnitude");
    cmd->add_option("--dict-ring-hi", ring_hi, "ring upper magnitude");
    cmd->add_option("--dict-seed", dict_seed, "pole ring seed");
    cmd->add_flag("--dict-no-const", no_const, "omit the constant atom");
    cmd->add_flag("--dict-normalize", normalize, "unit-normalize columns");
  }

  DynDictionary build(const Global& g, int default_rows) const {
    if (!dict_file.empty())
      return dictionary_from_json(json::parse(read_text(dict_file)));
    if (g.config.contains("dictionary"))
      return dictionary_from_config(g.config.at("dictionary"));
    const int T = rows > 0 ? rows : default_rows;
    const int n_pairs = pairs > 0 ? pairs : 2 * T;
    const std::uint64_t s = dict_seed ? dict_seed : g.seed;
    return build_dictionary(init_pole_ring(n_pairs, ring_lo, ring_hi, s,
                                           !no_const),
                            T, normalize);
  }
};

struct SelectorFlags {
  SelectorConfig base;
  double lambda_scale = -1.0;
  double rho_scale = -1.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--lambda", base.lambda, "frame-count penalty");
    cmd->add_option("--rho", base.rho, "recovery perturbation");
    cmd->add_option("--lambda-scale", lambda_scale,
                    "lambda = scale * ||Y||^2 / T (overrides --lambda)");
    cmd->add_option("--rho-scale", rho_scale,
                    "rho = scale * mean diag G (overrides --rho)");
    cmd->add_option("--alpha-start", base.alpha_start, "sigmoid sharpness");
    cmd->add_option("--alpha-growth", base.alpha_growth, "sharpness ramp");
    cmd->add_option("--max-iter", base.max_iter, "optimizer iterations");
    cmd->add_option("--lr", base.learning_rate, "optimizer learning rate");
    cmd->add_option("--threshold", base.threshold, "binarization threshold");
  }

  void merge_config(const Global& g) {
    if (!g.config.contains("selector")) return;
    const json& j = g.config.at("selector");
    base = selector_config_from_json(j, base);
    lambda_scale = j.value("lambda_scale", lambda_scale);
    rho_scale = j.value("rho_scale", rho_scale);
  }

  json to_json() const {
    json j = selector_config_to_json(base);
    j["lambda_scale"] = lambda_scale;
    j["rho_scale"] = rho_scale;
    return j;
  }
};

FeatureSequence load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (path.ends_with(".jsonl")) return features_from_jsonl(in);
  return features_from_csv(in);
}

SkeletonSequence load_skeleton(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (path.ends_with(".csv")) return skeleton_from_csv(in);
  return skeleton_from_jsonl(in);
}

// --input file, or --corpus file with --index.
struct InputFlags {
  std::string input;
  std::string corpus_file;
  int index = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--input", input, "feature CSV/JSONL file");
    cmd->add_option("--corpus", corpus_file, "corpus JSON (with --index)");
    cmd->add_option("--index", index, "sequence index within --corpus");
  }

  FeatureSequence load() const {
    if (!input.empty()) return load_features(input);
    if (corpus_file.empty())
      throw std::runtime_error("provide --input or --corpus");
    const SynthCorpus c =
        corpus_from_json(json::parse(read_text(corpus_file)));
    if (index < 0 || index >= static_cast<int>(c.sequences.size()))
      throw std::runtime_error("--index out of range");
    return c.sequences[index];
  }
};

int cmd_synth(const Global& g, const SynthSpec& spec) {
  const SynthCorpus corpus = synth_corpus(spec, g.seed);
  write_text(g.out("corpus.json"), corpus_to_json(corpus).dump(2) + "\n");
  std::cout << "wrote " << g.out("corpus.json") << " ("
            << corpus.sequences.size() << " sequences, T="
            << spec.num_rows << ", M=" << spec.num_features << ")\n";
  return 0;
}

int cmd_select(const Global& g, const InputFlags& in, const DictFlags& df,
               SelectorFlags sf) {
  sf.merge_config(g);
  const FeatureSequence y = in.load();
  const DynDictionary dict = df.build(g, static_cast<int>(y.rows()));
  const SelectorConfig scfg = resolve_selector(
      sf.base, sf.lambda_scale, sf.rho_scale, dict, y);
  const auto [ind, diag] = select_keyframes(dict, y, scfg);
  const std::vector<int> sel = ind.binarize();
  const double rec = recovery_for_selection(dict, y, sel, scfg.rho);

  json out = selection_to_json(ind, rec, scfg.lambda, scfg.rho,
                               diag.iterations);
  out["config"] = sf.to_json();
  out["config"]["resolved_lambda"] = scfg.lambda;
  out["config"]["resolved_rho"] = scfg.rho;
  out["config"]["seed"] = g.seed;
  out["loss_trace"] = diag.loss_trace;
  write_text(g.out("selection.json"), out.dump(2) + "\n");

  std::string trace = "iteration,total_loss\n";
  for (std::size_t i = 0; i < diag.loss_trace.size(); ++i)
    trace += std::to_string(i) + "," + std::to_string(diag.loss_trace[i]) +
             "\n";
  write_text(g.out("trace.csv"), trace);
  std::cout << "selected " << sel.size() << " of " << y.rows()
            << " frames; recovery " << rec << "\n";
  return 0;
}

int cmd_interpolate(const Global& g, const DictFlags& df,
                    const std::string& selection_file,
                    const std::string& skeleton_file) {
  const SkeletonSequence src = load_skeleton(skeleton_file);
  const DynDictionary dict = df.build(g, src.frames());
  const Indicator ind =
      selection_from_json(json::parse(read_text(selection_file)));
  const std::vector<int> sel = ind.binarize();
  Eigen::MatrixXd keys(static_cast<int>(sel.size()), src.coords.cols());
  for (std::size_t i = 0; i < sel.size(); ++i)
    keys.row(static_cast<int>(i)) = src.coords.row(sel[i]);
  SkeletonSequence recon = interpolate(dict, sel, keys);
  recon.visibility = src.visibility;
  recon.bbox = src.bbox;
  write_text(g.out("reconstruction.jsonl"), skeleton_to_jsonl(recon));
  write_text(g.out("reconstruction.csv"), skeleton_to_csv(recon));
  std::cout << "interpolated " << recon.frames() << " frames from "
            << sel.size() << " keys\n";
  return 0;
}

int cmd_pipeline(const Global& g, const InputFlags& in, const DictFlags& df,
                 SelectorFlags sf, const std::string& skeleton_file,
                 int window) {
  sf.merge_config(g);
  const FeatureSequence y = in.load();
  const SkeletonSequence src = skeleton_file.empty()
                                   ? as_skeleton(y)
                                   : load_skeleton(skeleton_file);
  const int W = window > 0 ? window
                           : std::min<int>(40, static_cast<int>(y.rows()));
  DictFlags dfw = df;
  dfw.rows = W;
  const DynDictionary dict = dfw.build(g, W);

  PipelineConfig pcfg;
  pcfg.selector = sf.base;
  pcfg.lambda_scale = sf.lambda_scale;
  pcfg.rho_scale = sf.rho_scale;
  pcfg.window = W;
  const PipelineResult res = pipeline(dict, dict, y, src, pcfg);

  write_text(g.out("reconstruction.jsonl"), skeleton_to_jsonl(res.skeleton));
  json rep;
  rep["selection"] = res.selection.binarize();
  rep["windows"] = json::array();
  for (const auto& [a, b] : res.windows)
    rep["windows"].push_back({a, b});
  rep["config"] = sf.to_json();
  rep["config"]["window"] = W;
  rep["config"]["seed"] = g.seed;
  const PckReport pck = eval_pck(res.skeleton, src);
  rep["pck"] = pck_report_to_json(pck);
  write_text(g.out("pipeline.json"), rep.dump(2) + "\n");
  std::cout << "pipeline kept " << res.selection.binarize().size() << " of "
            << y.rows() << " frames; mean PCK " << pck.overall << "\n";
  return 0;
}

int cmd_online(const Global& g, const InputFlags& in, const DictFlags& df,
               SelectorFlags sf, int warmup, OnlineConfig oc) {
  sf.merge_config(g);
  const FeatureSequence y = in.load();
  if (warmup < 2 || warmup > y.rows())
    throw std::runtime_error("--warmup must lie in [2, T]");
  DictFlags dfw = df;
  dfw.rows = warmup;
  const DynDictionary dict = dfw.build(g, warmup);
  oc.selector = sf.base;
  oc.lambda_scale = sf.lambda_scale;
  oc.rho_scale = sf.rho_scale;
  if (g.config.contains("online")) {
    const json& j = g.config.at("online");
    oc.tau = j.value("tau", oc.tau);
    oc.code_alpha = j.value("code_alpha", oc.code_alpha);
    oc.code_max_iter = j.value("code_max_iter", oc.code_max_iter);
    oc.code_tol = j.value("code_tol", oc.code_tol);
    oc.jitter = j.value("jitter", oc.jitter);
  }

  OnlineState st = init_online(dict, y.topRows(warmup), oc);
  std::string log;
  for (int i = 0; i < warmup; ++i) {
    const bool key = std::find(st.selected.begin(), st.selected.end(), i) !=
                     st.selected.end();
    log += json{{"frame", i}, {"admitted", key}, {"residual", nullptr},
                {"phase", "warmup"}}
               .dump() +
           "\n";
  }
  for (int t = warmup; t < y.rows(); ++t) {
    StepInfo info;
    const bool admitted = step(st, y.row(t).transpose(), &info);
    log += json{{"frame", t},
                {"admitted", admitted},
                {"residual", info.residual},
                {"phase", "stream"}}
               .dump() +
           "\n";
  }
  write_text(g.out("online.jsonl"), log);

  json out{{"selected", st.selected},
           {"tau", oc.tau},
           {"code_alpha", oc.code_alpha},
           {"warmup", warmup},
           {"config", sf.to_json()}};
  out["config"]["seed"] = g.seed;
  write_text(g.out("online_selection.json"), out.dump(2) + "\n");
  std::cout << "online kept " << st.selected.size() << " of " << y.rows()
            << " frames\n";
  return 0;
}

int cmd_oracle(const Global& g, const InputFlags& in, const DictFlags& df,
               int r, double rho, double rho_scale, std::uint64_t budget) {
  const FeatureSequence y = in.load();
  const DynDictionary dict = df.build(g, static_cast<int>(y.rows()));
  if (rho_scale > 0.0) rho = rho_scale * dict.gram.diagonal().mean();
  const auto [sel, rec] = brute_force_select(dict, y, r, rho, budget);
  json out{{"indices", sel}, {"recovery", rec}, {"r", r}, {"rho", rho},
           {"budget", budget}};
  write_text(g.out("oracle.json"), out.dump(2) + "\n");
  std::cout << "brute-force optimum recovery " << rec << "\n";
  return 0;
}

int cmd_train_dict(const Global& g, const std::string& corpus_file,
                   int init_pairs, double ring_lo, double ring_hi,
                   bool no_const, double alpha, int epochs, double lr,
                   int heldout) {
  const SynthCorpus corpus =
      corpus_from_json(json::parse(read_text(corpus_file)));
  std::vector<FeatureSequence> train = corpus.sequences;
  std::vector<FeatureSequence> held;
  if (heldout > 0) {
    if (heldout >= static_cast<int>(train.size()))
      throw std::runtime_error("--heldout leaves no training sequences");
    held.assign(train.end() - heldout, train.end());
    train.resize(train.size() - heldout);
  }
  const PoleSet init =
      init_pole_ring(init_pairs, ring_lo, ring_hi, g.seed, !no_const);
  const TrainResult res = train_dictionary(init, train, alpha, epochs, lr);

  json out = pole_set_to_json(res.poles);
  out["alpha"] = alpha;
  out["epochs"] = epochs;
  out["lr"] = lr;
  out["seed"] = g.seed;
  out["final_objective"] = res.loss_trace.back();
  out["initial_objective"] = res.loss_trace.front();
  if (!held.empty()) {
    out["heldout_initial"] = evaluate_dictionary(init, held, alpha);
    out["heldout_final"] = evaluate_dictionary(res.poles, held, alpha);
  }
  write_text(g.out("learned_poles.json"), out.dump(2) + "\n");
  std::string trace = "epoch,objective\n";
  for (std::size_t i = 0; i < res.loss_trace.size(); ++i)
    trace += std::to_string(i) + "," + std::to_string(res.loss_trace[i]) +
             "\n";
  write_text(g.out("train_trace.csv"), trace);
  std::cout << "objective " << res.loss_trace.front() << " -> "
            << res.loss_trace.back() << " over " << epochs << " epochs\n";
  return 0;
}

int cmd_eval_pck(const Global& g, const std::string& pred_file,
                 const std::string& gt_file, double beta) {
  const SkeletonSequence pred = load_skeleton(pred_file);
  const SkeletonSequence gt = load_skeleton(gt_file);
  PckConfig cfg;
  cfg.beta = beta;
  const PckReport rep = eval_pck(pred, gt, cfg);
  json out = pck_report_to_json(rep);
  out["beta"] = beta;
  write_text(g.out("pck.json"), out.dump(2) + "\n");
  std::cout << "mean PCK " << rep.overall << "\n";
  return 0;
}

int cmd_bench_table2(const Global& g, const std::string& corpus_file,
                     const std::string& dict_file, BenchSelectorConfig cfg,
                     std::uint64_t corpus_seed) {
  const SynthCorpus corpus =
      corpus_file.empty()
          ? pinned_table2_corpus(corpus_seed)
          : corpus_from_json(json::parse(read_text(corpus_file)));
  const DynDictionary dict =
      dict_file.empty()
          ? pinned_table2_dictionary()
          : dictionary_from_json(json::parse(read_text(dict_file)));
  const Table2Report rep = bench_table2(corpus, dict, cfg);
  write_text(g.out("table2.csv"), rep.to_csv());
  write_text(g.out("table2.json"), table2_report_to_json(rep).dump(2) + "\n");
  std::cout << "within 1.5x brute: " << rep.frac_within_1p5_brute * 100
            << "% | beats uniform (nonstationary): "
            << rep.frac_beats_uniform_nonstat * 100
            << "% | mean cardinality " << rep.mean_cardinality << "\n";
  return 0;
}

int cmd_bench_online(const Global& g, const std::string& corpus_file,
                     OnlineBenchConfig cfg, int T_b, int T_o,
                     std::uint64_t corpus_seed) {
  const SynthCorpus corpus =
      corpus_file.empty()
          ? pinned_online_corpus(corpus_seed)
          : corpus_from_json(json::parse(read_text(corpus_file)));
  const OnlineBenchReport rep = bench_online(corpus, cfg, T_b, T_o);
  write_text(g.out("bench_online.csv"), rep.to_csv());
  write_text(g.out("bench_online.json"),
             online_report_to_json(rep).dump(2) + "\n");
  std::cout << "recovery delta " << rep.main.recovery_delta * 100
            << "% | count delta " << rep.main.count_delta
            << " | sweep Spearman " << rep.sweep_spearman << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-frame selection and dynamics-based interpolation"};
  app.require_subcommand(1);

  Global g;
  app.add_option("--seed", g.seed, "global seed")->capture_default_str();
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out_dir, "output directory")
      ->capture_default_str();

  // synth
  SynthSpec synth_spec;
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic corpus");
  c_synth->add_option("--num-seqs", synth_spec.num_seqs);
  c_synth->add_option("--rows", synth_spec.num_rows);
  c_synth->add_option("--features", synth_spec.num_features);
  c_synth->add_option("--pairs", synth_spec.pole_pairs);
  c_synth->add_option("--mag-lo", synth_spec.mag_lo);
  c_synth->add_option("--mag-hi", synth_spec.mag_hi);
  c_synth->add_option("--phase-lo", synth_spec.phase_lo);
  c_synth->add_option("--phase-hi", synth_spec.phase_hi);
  c_synth->add_option("--noise", synth_spec.noise_sigma);
  c_synth->add_flag("--noise-relative", synth_spec.noise_relative);
  c_synth->add_option("--changepoint", synth_spec.changepoint);

  // select
  InputFlags sel_in;
  DictFlags sel_dict;
  SelectorFlags sel_sf;
  auto* c_select = app.add_subcommand("select", "select key frames");
  sel_in.add(c_select);
  sel_dict.add(c_select);
  sel_sf.add(c_select);

  // interpolate
  DictFlags int_dict;
  std::string int_selection, int_skeleton;
  auto* c_interp =
      app.add_subcommand("interpolate", "reconstruct from key skeletons");
  int_dict.add(c_interp);
  c_interp->add_option("--selection", int_selection, "selection JSON")
      ->required();
  c_interp->add_option("--skeleton", int_skeleton, "skeleton JSONL/CSV")
      ->required();

  // pipeline
  InputFlags pipe_in;
  DictFlags pipe_dict;
  SelectorFlags pipe_sf;
  std::string pipe_skeleton;
  int pipe_window = 0;
  auto* c_pipe =
      app.add_subcommand("pipeline", "select + interpolate end to end");
  pipe_in.add(c_pipe);
  pipe_dict.add(c_pipe);
  pipe_sf.add(c_pipe);
  c_pipe->add_option("--skeleton", pipe_skeleton,
                     "skeleton source (default: features as coords)");
  c_pipe->add_option("--window", pipe_window, "selection window (default 40)");

  // online
  InputFlags on_in;
  DictFlags on_dict;
  SelectorFlags on_sf;
  int on_warmup = 30;
  OnlineConfig on_cfg;
  auto* c_online = app.add_subcommand("online", "stream frames past a warm-up");
  on_in.add(c_online);
  on_dict.add(c_online);
  on_sf.add(c_online);
  c_online->add_option("--warmup", on_warmup, "warm-up frames")
      ->capture_default_str();
  c_online->add_option("--tau", on_cfg.tau, "admission threshold")
      ->capture_default_str();
  c_online->add_option("--code-alpha", on_cfg.code_alpha,
                       "prediction code sparsity (0 = min-norm)");
  c_online->add_option("--code-iters", on_cfg.code_max_iter);
  c_online->add_option("--code-tol", on_cfg.code_tol);
  c_online->add_option("--jitter", on_cfg.jitter);

  // oracle
  InputFlags or_in;
  DictFlags or_dict;
  int or_r = 3;
  double or_rho = 1e-2, or_rho_scale = -1.0;
  std::uint64_t or_budget = 1000000;
  auto* c_oracle = app.add_subcommand("oracle", "brute-force selection");
  or_in.add(c_oracle);
  or_dict.add(c_oracle);
  c_oracle->add_option("--r", or_r, "cardinality")->required();
  c_oracle->add_option("--rho", or_rho);
  c_oracle->add_option("--rho-scale", or_rho_scale);
  c_oracle->add_option("--budget", or_budget);

  // train-dict
  std::string td_corpus;
  int td_pairs = 8, td_epochs = 50, td_heldout = 0;
  double td_lo = 0.85, td_hi = 1.15, td_alpha = 0.1, td_lr = 1e-3;
  bool td_no_const = false;
  auto* c_train = app.add_subcommand("train-dict", "learn dictionary poles");
  c_train->add_option("--corpus", td_corpus, "corpus JSON")->required();
  c_train->add_option("--init-pairs", td_pairs)->capture_default_str();
  c_train->add_option("--init-ring-lo", td_lo)->capture_default_str();
  c_train->add_option("--init-ring-hi", td_hi)->capture_default_str();
  c_train->add_flag("--no-const", td_no_const);
  c_train->add_option("--alpha", td_alpha)->capture_default_str();
  c_train->add_option("--epochs", td_epochs)->capture_default_str();
  c_train->add_option("--lr", td_lr)->capture_default_str();
  c_train->add_option("--heldout", td_heldout,
                      "hold out the last K sequences");

  // eval-pck
  std::string pck_pred, pck_gt;
  double pck_beta = 0.2;
  auto* c_pck = app.add_subcommand("eval-pck", "PCK of predicted skeletons");
  c_pck->add_option("--pred", pck_pred)->required();
  c_pck->add_option("--gt", pck_gt)->required();
  c_pck->add_option("--beta", pck_beta)->capture_default_str();

  // bench-table2
  std::string b2_corpus, b2_dict;
  BenchSelectorConfig b2_cfg;
  std::uint64_t b2_corpus_seed = 17;
  auto* c_b2 = app.add_subcommand("bench-table2",
                                  "selected vs baseline recovery comparison");
  c_b2->add_option("--corpus", b2_corpus, "corpus JSON (default: pinned T=8)");
  c_b2->add_option("--dict", b2_dict, "dictionary JSON (default: pinned)");
  c_b2->add_option("--corpus-seed", b2_corpus_seed)->capture_default_str();
  c_b2->add_option("--lambda-scale", b2_cfg.lambda_scale)
      ->capture_default_str();
  c_b2->add_option("--rho-scale", b2_cfg.rho_scale)->capture_default_str();
  c_b2->add_option("--n-random", b2_cfg.n_random)->capture_default_str();
  c_b2->add_option("--budget", b2_cfg.brute_budget)->capture_default_str();
  c_b2->add_flag("--with-pck", b2_cfg.with_pck);

  // bench-online
  std::string bo_corpus;
  OnlineBenchConfig bo_cfg;
  int bo_Tb = 30, bo_To = 10;
  std::uint64_t bo_corpus_seed = 101;
  auto* c_bo =
      app.add_subcommand("bench-online", "online vs batch agreement study");
  c_bo->add_option("--corpus", bo_corpus, "corpus JSON (default: pinned T=40)");
  c_bo->add_option("--corpus-seed", bo_corpus_seed)->capture_default_str();
  c_bo->add_option("--T-b", bo_Tb, "warm-up horizon")->capture_default_str();
  c_bo->add_option("--T-o", bo_To, "streamed frames")->capture_default_str();
  c_bo->add_option("--tau", bo_cfg.tau)->capture_default_str();
  c_bo->add_option("--code-alpha", bo_cfg.code_alpha)->capture_default_str();
  c_bo->add_option("--lambda-scale", bo_cfg.sel.lambda_scale)
      ->capture_default_str();
  c_bo->add_option("--rho-scale", bo_cfg.sel.rho_scale)->capture_default_str();
  c_bo->add_option("--warmup-grid", bo_cfg.warmup_grid,
                   "warm-up horizons for the sweep")
      ->delimiter(',');
  c_bo->add_flag("--with-pck", bo_cfg.sel.with_pck);

  CLI11_PARSE(app, argc, argv);

  try {
    g.load();
    if (c_synth->parsed()) return cmd_synth(g, synth_spec);
    if (c_select->parsed()) return cmd_select(g, sel_in, sel_dict, sel_sf);
    if (c_interp->parsed())
      return cmd_interpolate(g, int_dict, int_selection, int_skeleton);
    if (c_pipe->parsed())
      return cmd_pipeline(g, pipe_in, pipe_dict, pipe_sf, pipe_skeleton,
                          pipe_window);
    if (c_online->parsed())
      return cmd_online(g, on_in, on_dict, on_sf, on_warmup, on_cfg);
    if (c_oracle->parsed())
      return cmd_oracle(g, or_in, or_dict, or_r, or_rho, or_rho_scale,
                        or_budget);
    if (c_train->parsed())
      return cmd_train_dict(g, td_corpus, td_pairs, td_lo, td_hi, td_no_const,
                            td_alpha, td_epochs, td_lr, td_heldout);
    if (c_pck->parsed()) return cmd_eval_pck(g, pck_pred, pck_gt, pck_beta);
    if (c_b2->parsed())
      return cmd_bench_table2(g, b2_corpus, b2_dict, b2_cfg, b2_corpus_seed);
    if (c_bo->parsed()) {
      bo_cfg.poles = pinned_online_poles();
      return cmd_bench_online(g, bo_corpus, bo_cfg, bo_Tb, bo_To,
                              bo_corpus_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
