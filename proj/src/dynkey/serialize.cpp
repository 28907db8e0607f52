#include "dynkey/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dynkey {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool numeric_token(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix JSON must be a non-empty array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j.at(i).size()) != cols)
      throw std::invalid_argument("matrix JSON rows have unequal lengths");
    for (int c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

json pole_set_to_json(const PoleSet& ps) {
  json poles = json::array();
  for (const Pole& p : ps.poles)
    poles.push_back({{"mag", p.mag},
                     {"phase", p.phase},
                     {"kind", p.kind == PoleKind::Real ? "real" : "complex"}});
  return {{"poles", std::move(poles)},
          {"include_constant_atom", ps.include_constant_atom}};
}

PoleSet pole_set_from_json(const json& j) {
  PoleSet ps;
  ps.include_constant_atom = j.value("include_constant_atom", true);
  for (const json& pj : j.at("poles")) {
    Pole p;
    p.mag = pj.at("mag").get<double>();
    p.phase = pj.at("phase").get<double>();
    const std::string kind = pj.value("kind", "complex");
    if (kind == "real")
      p.kind = PoleKind::Real;
    else if (kind == "complex")
      p.kind = PoleKind::Complex;
    else
      throw std::invalid_argument("pole kind must be 'real' or 'complex'");
    ps.poles.push_back(p);
  }
  return ps;
}

json dictionary_to_json(const DynDictionary& d) {
  json j = pole_set_to_json(d.source);
  j["num_rows"] = d.num_rows;
  j["normalize_flag"] = d.normalized;
  return j;
}

DynDictionary dictionary_from_json(const json& j) {
  return build_dictionary(pole_set_from_json(j), j.at("num_rows").get<int>(),
                          j.value("normalize_flag", false));
}

json selection_to_json(const Indicator& ind, double recovery, double lambda,
                       double rho, int iterations) {
  json soft = json::array();
  for (int i = 0; i < ind.values.size(); ++i) soft.push_back(ind.values[i]);
  return {{"indices", ind.binarize()}, {"soft", std::move(soft)},
          {"recovery", recovery},      {"lambda", lambda},
          {"rho", rho},                {"iterations", iterations},
          {"threshold", ind.threshold}};
}

Indicator selection_from_json(const json& j) {
  Indicator ind;
  ind.threshold = j.value("threshold", 0.5);
  const json& soft = j.at("soft");
  ind.values = Eigen::VectorXd::Zero(static_cast<int>(soft.size()));
  for (int i = 0; i < ind.values.size(); ++i)
    ind.values[i] = soft.at(i).get<double>();
  return ind;
}

std::string features_to_csv(const FeatureSequence& seq) {
  std::string out;
  for (int i = 0; i < seq.rows(); ++i) {
    for (int j = 0; j < seq.cols(); ++j) {
      if (j) out += ",";
      out += fmt(seq(i, j));
    }
    out += "\n";
  }
  return out;
}

FeatureSequence features_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> toks = split_csv_line(line);
    if (rows.empty() && !numeric_token(toks.front())) continue;  // header
    std::vector<double> row;
    for (const std::string& t : toks) {
      if (!numeric_token(t))
        throw std::invalid_argument("non-numeric CSV cell: " + t);
      row.push_back(std::strtod(t.c_str(), nullptr));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("ragged CSV rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty feature CSV");
  FeatureSequence seq(static_cast<int>(rows.size()),
                      static_cast<int>(rows.front().size()));
  for (int i = 0; i < seq.rows(); ++i)
    for (int j = 0; j < seq.cols(); ++j) seq(i, j) = rows[i][j];
  return seq;
}

std::string features_to_jsonl(const FeatureSequence& seq) {
  std::string out;
  for (int i = 0; i < seq.rows(); ++i) {
    json feats = json::array();
    for (int j = 0; j < seq.cols(); ++j) feats.push_back(seq(i, j));
    out += json{{"frame", i}, {"features", std::move(feats)}}.dump();
    out += "\n";
  }
  return out;
}

FeatureSequence features_from_jsonl(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    std::vector<double> row;
    for (const json& v : j.at("features")) row.push_back(v.get<double>());
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("ragged feature JSONL");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty feature JSONL");
  FeatureSequence seq(static_cast<int>(rows.size()),
                      static_cast<int>(rows.front().size()));
  for (int i = 0; i < seq.rows(); ++i)
    for (int j = 0; j < seq.cols(); ++j) seq(i, j) = rows[i][j];
  return seq;
}

std::string skeleton_to_jsonl(const SkeletonSequence& sk) {
  std::string out;
  const int J = sk.joints();
  for (int k = 0; k < sk.frames(); ++k) {
    json joints = json::array();
    for (int j = 0; j < J; ++j)
      joints.push_back({sk.coords(k, 2 * j), sk.coords(k, 2 * j + 1)});
    json visible = json::array();
    for (int j = 0; j < J; ++j)
      visible.push_back(k < static_cast<int>(sk.visibility.size())
                            ? static_cast<bool>(sk.visibility[k][j])
                            : true);
    json rec{{"frame", k},
             {"joints", std::move(joints)},
             {"visible", std::move(visible)}};
    if (k < static_cast<int>(sk.bbox.size()))
      rec["bbox"] = {sk.bbox[k][0], sk.bbox[k][1], sk.bbox[k][2],
                     sk.bbox[k][3]};
    out += rec.dump();
    out += "\n";
  }
  return out;
}

SkeletonSequence skeleton_from_jsonl(std::istream& in) {
  std::vector<json> recs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    recs.push_back(json::parse(line));
  }
  if (recs.empty()) throw std::invalid_argument("empty skeleton JSONL");
  const int T = static_cast<int>(recs.size());
  const int J = static_cast<int>(recs.front().at("joints").size());
  SkeletonSequence sk;
  sk.coords.resize(T, 2 * J);
  sk.visibility.assign(T, std::vector<bool>(J, true));
  sk.bbox.assign(T, {0.0, 0.0, 0.0, 0.0});
  for (int k = 0; k < T; ++k) {
    const json& r = recs[k];
    if (static_cast<int>(r.at("joints").size()) != J)
      throw std::invalid_argument("skeleton JSONL has varying joint counts");
    for (int j = 0; j < J; ++j) {
      sk.coords(k, 2 * j) = r.at("joints").at(j).at(0).get<double>();
      sk.coords(k, 2 * j + 1) = r.at("joints").at(j).at(1).get<double>();
    }
    if (r.contains("visible"))
      for (int j = 0; j < J; ++j)
        sk.visibility[k][j] = r.at("visible").at(j).get<bool>();
    if (r.contains("bbox"))
      for (int b = 0; b < 4; ++b)
        sk.bbox[k][b] = r.at("bbox").at(b).get<double>();
  }
  return sk;
}

std::string skeleton_to_csv(const SkeletonSequence& sk) {
  const int J = sk.joints();
  std::string out = "frame";
  for (int j = 1; j <= J; ++j)
    out += ",x" + std::to_string(j) + ",y" + std::to_string(j);
  for (int j = 1; j <= J; ++j) out += ",v" + std::to_string(j);
  out += ",bbox_x,bbox_y,bbox_w,bbox_h\n";
  for (int k = 0; k < sk.frames(); ++k) {
    out += std::to_string(k);
    for (int j = 0; j < J; ++j)
      out += "," + fmt(sk.coords(k, 2 * j)) + "," + fmt(sk.coords(k, 2 * j + 1));
    for (int j = 0; j < J; ++j)
      out += std::string(",") +
             ((k < static_cast<int>(sk.visibility.size()) &&
               !sk.visibility[k][j])
                  ? "0"
                  : "1");
    const bool has_box = k < static_cast<int>(sk.bbox.size());
    for (int b = 0; b < 4; ++b)
      out += "," + fmt(has_box ? sk.bbox[k][b] : 0.0);
    out += "\n";
  }
  return out;
}

SkeletonSequence skeleton_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty skeleton CSV");
  std::vector<std::vector<std::string>> rows;
  const bool had_header = !numeric_token(split_csv_line(line).front());
  if (!had_header) rows.push_back(split_csv_line(line));
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw std::invalid_argument("skeleton CSV has no frames");
  const int ncols = static_cast<int>(rows.front().size());
  if ((ncols - 5) % 3 != 0 || ncols < 8)
    throw std::invalid_argument(
        "skeleton CSV needs columns frame, 2J coords, J visibility, 4 bbox");
  const int J = (ncols - 5) / 3;
  const int T = static_cast<int>(rows.size());
  SkeletonSequence sk;
  sk.coords.resize(T, 2 * J);
  sk.visibility.assign(T, std::vector<bool>(J, true));
  sk.bbox.assign(T, {0.0, 0.0, 0.0, 0.0});
  for (int k = 0; k < T; ++k) {
    const auto& r = rows[k];
    if (static_cast<int>(r.size()) != ncols)
      throw std::invalid_argument("ragged skeleton CSV");
    for (int j = 0; j < 2 * J; ++j)
      sk.coords(k, j) = std::strtod(r[1 + j].c_str(), nullptr);
    for (int j = 0; j < J; ++j)
      sk.visibility[k][j] = std::strtod(r[1 + 2 * J + j].c_str(), nullptr) != 0.0;
    for (int b = 0; b < 4; ++b)
      sk.bbox[k][b] = std::strtod(r[1 + 3 * J + b].c_str(), nullptr);
  }
  return sk;
}

namespace {

json truth_to_json(const SynthTruth& t) {
  json j{{"nonstationary", t.nonstationary}, {"changepoint", t.changepoint}};
  json pa = json::array();
  for (const Pole& p : t.poles_a)
    pa.push_back({{"mag", p.mag},
                  {"phase", p.phase},
                  {"kind", p.kind == PoleKind::Real ? "real" : "complex"}});
  j["poles_a"] = std::move(pa);
  j["coeffs_a"] = matrix_to_json(t.coeffs_a);
  if (t.nonstationary) {
    json pb = json::array();
    for (const Pole& p : t.poles_b)
      pb.push_back({{"mag", p.mag},
                    {"phase", p.phase},
                    {"kind", p.kind == PoleKind::Real ? "real" : "complex"}});
    j["poles_b"] = std::move(pb);
    j["coeffs_b"] = matrix_to_json(t.coeffs_b);
  }
  return j;
}

std::vector<Pole> poles_from_json(const json& arr) {
  std::vector<Pole> out;
  for (const json& pj : arr) {
    Pole p;
    p.mag = pj.at("mag").get<double>();
    p.phase = pj.at("phase").get<double>();
    p.kind = pj.value("kind", "complex") == "real" ? PoleKind::Real
                                                   : PoleKind::Complex;
    out.push_back(p);
  }
  return out;
}

}  // namespace

json corpus_to_json(const SynthCorpus& corpus) {
  json spec{{"num_seqs", corpus.spec.num_seqs},
            {"num_rows", corpus.spec.num_rows},
            {"num_features", corpus.spec.num_features},
            {"pole_pairs", corpus.spec.pole_pairs},
            {"mag_lo", corpus.spec.mag_lo},
            {"mag_hi", corpus.spec.mag_hi},
            {"phase_lo", corpus.spec.phase_lo},
            {"phase_hi", corpus.spec.phase_hi},
            {"noise_sigma", corpus.spec.noise_sigma},
            {"noise_relative", corpus.spec.noise_relative},
            {"changepoint", corpus.spec.changepoint}};
  json seqs = json::array();
  for (const FeatureSequence& y : corpus.sequences)
    seqs.push_back(matrix_to_json(y));
  json truth = json::array();
  for (const SynthTruth& t : corpus.truth) truth.push_back(truth_to_json(t));
  return {{"spec", std::move(spec)},
          {"seed", corpus.seed},
          {"sequences", std::move(seqs)},
          {"truth", std::move(truth)}};
}

SynthCorpus corpus_from_json(const json& j) {
  SynthCorpus corpus;
  const json& s = j.at("spec");
  corpus.spec.num_seqs = s.at("num_seqs").get<int>();
  corpus.spec.num_rows = s.at("num_rows").get<int>();
  corpus.spec.num_features = s.at("num_features").get<int>();
  corpus.spec.pole_pairs = s.at("pole_pairs").get<int>();
  corpus.spec.mag_lo = s.at("mag_lo").get<double>();
  corpus.spec.mag_hi = s.at("mag_hi").get<double>();
  corpus.spec.phase_lo = s.at("phase_lo").get<double>();
  corpus.spec.phase_hi = s.at("phase_hi").get<double>();
  corpus.spec.noise_sigma = s.at("noise_sigma").get<double>();
  corpus.spec.noise_relative = s.value("noise_relative", false);
  corpus.spec.changepoint = s.at("changepoint").get<int>();
  corpus.seed = j.at("seed").get<std::uint64_t>();
  for (const json& sj : j.at("sequences"))
    corpus.sequences.push_back(matrix_from_json(sj));
  for (const json& tj : j.at("truth")) {
    SynthTruth t;
    t.nonstationary = tj.at("nonstationary").get<bool>();
    t.changepoint = tj.at("changepoint").get<int>();
    t.poles_a = poles_from_json(tj.at("poles_a"));
    t.coeffs_a = matrix_from_json(tj.at("coeffs_a"));
    if (t.nonstationary) {
      t.poles_b = poles_from_json(tj.at("poles_b"));
      t.coeffs_b = matrix_from_json(tj.at("coeffs_b"));
    }
    corpus.truth.push_back(std::move(t));
  }
  return corpus;
}

json selector_config_to_json(const SelectorConfig& cfg) {
  return {{"lambda", cfg.lambda},
          {"rho", cfg.rho},
          {"alpha_start", cfg.alpha_start},
          {"alpha_growth", cfg.alpha_growth},
          {"max_iter", cfg.max_iter},
          {"learning_rate", cfg.learning_rate},
          {"threshold", cfg.threshold}};
}

SelectorConfig selector_config_from_json(const json& j,
                                         const SelectorConfig& base) {
  SelectorConfig cfg = base;
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.rho = j.value("rho", cfg.rho);
  cfg.alpha_start = j.value("alpha_start", cfg.alpha_start);
  cfg.alpha_growth = j.value("alpha_growth", cfg.alpha_growth);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.threshold = j.value("threshold", cfg.threshold);
  return cfg;
}

json pck_report_to_json(const PckReport& rep) {
  json per = json::array();
  for (double v : rep.per_joint) per.push_back(v);
  return {{"per_joint", std::move(per)},
          {"visible_counts", rep.visible_counts},
          {"overall", rep.overall}};
}

namespace {

json bench_selector_config_to_json(const BenchSelectorConfig& cfg) {
  json j = selector_config_to_json(cfg.base);
  j["lambda_scale"] = cfg.lambda_scale;
  j["rho_scale"] = cfg.rho_scale;
  j["n_random"] = cfg.n_random;
  j["seed"] = cfg.seed;
  j["brute_budget"] = cfg.brute_budget;
  j["with_pck"] = cfg.with_pck;
  return j;
}

}  // namespace

json table2_report_to_json(const Table2Report& rep) {
  json rows = json::array();
  for (const Table2Row& r : rep.rows)
    rows.push_back({{"seq", r.seq},
                    {"cardinality", r.cardinality},
                    {"recovery_selected", r.recovery_selected},
                    {"recovery_uniform", r.recovery_uniform},
                    {"recovery_random", r.recovery_random},
                    {"recovery_brute", r.recovery_brute},
                    {"brute_available", r.brute_available},
                    {"nonstationary", r.nonstationary},
                    {"pck_selected", r.pck_selected},
                    {"pck_uniform", r.pck_uniform}});
  return {{"rows", std::move(rows)},
          {"frac_within_1p5_brute", rep.frac_within_1p5_brute},
          {"frac_beats_uniform_nonstat", rep.frac_beats_uniform_nonstat},
          {"mean_cardinality", rep.mean_cardinality},
          {"config", bench_selector_config_to_json(rep.config)}};
}

json online_report_to_json(const OnlineBenchReport& rep) {
  auto point = [](const OnlineBenchPoint& p) {
    return json{{"warmup", p.warmup},
                {"batch_recovery", p.batch_recovery},
                {"online_recovery", p.online_recovery},
                {"batch_count", p.batch_count},
                {"online_count", p.online_count},
                {"recovery_delta", p.recovery_delta},
                {"count_delta", p.count_delta},
                {"batch_pck", p.batch_pck},
                {"online_pck", p.online_pck}};
  };
  json sweep = json::array();
  for (const OnlineBenchPoint& p : rep.sweep) sweep.push_back(point(p));
  json cfg{{"normalize", rep.config.normalize},
           {"tau", rep.config.tau},
           {"code_alpha", rep.config.code_alpha},
           {"code_max_iter", rep.config.code_max_iter},
           {"code_tol", rep.config.code_tol},
           {"warmup_grid", rep.config.warmup_grid},
           {"selector", bench_selector_config_to_json(rep.config.sel)},
           {"poles", pole_set_to_json(rep.config.poles)}};
  return {{"T_b", rep.T_b},
          {"T_o", rep.T_o},
          {"main", point(rep.main)},
          {"sweep", std::move(sweep)},
          {"sweep_spearman", rep.sweep_spearman},
          {"config", std::move(cfg)}};
}

DynDictionary dictionary_from_config(const json& j) {
  if (j.contains("poles")) return dictionary_from_json(j);
  const int rows = j.at("num_rows").get<int>();
  const int pairs = j.value("pairs", 2 * rows);
  double lo = 0.85, hi = 1.15;
  if (j.contains("ring")) {
    lo = j.at("ring").at(0).get<double>();
    hi = j.at("ring").at(1).get<double>();
  }
  PoleSet ps = init_pole_ring(pairs, lo, hi, j.value("seed", 0ULL),
                              j.value("constant_atom", true));
  return build_dictionary(ps, rows, j.value("normalize", false));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace dynkey
