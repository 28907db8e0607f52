#pragma once
// JSON / JSONL / CSV interchange for every public type, plus config parsing.
// All emitters are deterministic (sorted object keys, fixed float format) so
// seeded CLI runs are byte-reproducible.

#include <istream>
#include <string>

#include "json.hpp"

#include "dynkey/bench.hpp"
#include "dynkey/dictionary.hpp"
#include "dynkey/hpim.hpp"
#include "dynkey/metrics.hpp"
#include "dynkey/online.hpp"
#include "dynkey/selector.hpp"
#include "dynkey/synth.hpp"
#include "dynkey/types.hpp"

namespace dynkey {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

nlohmann::json pole_set_to_json(const PoleSet& ps);
PoleSet pole_set_from_json(const nlohmann::json& j);

// {num_rows, poles, normalize_flag}; matrix and gram are rebuilt on load.
nlohmann::json dictionary_to_json(const DynDictionary& d);
DynDictionary dictionary_from_json(const nlohmann::json& j);

// {indices, soft, recovery, lambda, rho, iterations}
nlohmann::json selection_to_json(const Indicator& ind, double recovery,
                                 double lambda, double rho, int iterations);
Indicator selection_from_json(const nlohmann::json& j);

std::string features_to_csv(const FeatureSequence& seq);
FeatureSequence features_from_csv(std::istream& in);
std::string features_to_jsonl(const FeatureSequence& seq);
FeatureSequence features_from_jsonl(std::istream& in);

// One line per frame: {"frame", "joints" [[x,y]...], "visible", "bbox"}.
std::string skeleton_to_jsonl(const SkeletonSequence& sk);
SkeletonSequence skeleton_from_jsonl(std::istream& in);
// Columns: frame, x1,y1..xJ,yJ, v1..vJ, bbox x,y,w,h (header carries J).
std::string skeleton_to_csv(const SkeletonSequence& sk);
SkeletonSequence skeleton_from_csv(std::istream& in);

nlohmann::json corpus_to_json(const SynthCorpus& corpus);
SynthCorpus corpus_from_json(const nlohmann::json& j);

nlohmann::json selector_config_to_json(const SelectorConfig& cfg);
SelectorConfig selector_config_from_json(const nlohmann::json& j,
                                         const SelectorConfig& base = {});

nlohmann::json pck_report_to_json(const PckReport& rep);
nlohmann::json table2_report_to_json(const Table2Report& rep);
nlohmann::json online_report_to_json(const OnlineBenchReport& rep);

// Returns a dictionary described by config JSON: either explicit
// {"poles": ...} (dictionary_from_json form) or a ring spec
// {"num_rows", "pairs", "ring": [lo, hi], "seed", "constant_atom",
//  "normalize"}.
DynDictionary dictionary_from_config(const nlohmann::json& j);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

}  // namespace dynkey
