#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "locker/sim/evaluation.hpp"

namespace locker::cli {

enum class Scale { kPaper, kDesk };
Scale parse_scale(const std::string& s);  // "paper", "desk"

// One experiment document. JSON layout (every key optional, defaults come
// from the scale preset):
//   problem:    {"preset": "main"|"desk"|...} or a full problem config
//   settings:   ["1id", "3pu", ...]; [] runs the problem config as is
//   policies:   ["FC_DL", "RV-CER_LD", "V-CER_LD/BU", ...]  (feature scheme after '/')
//   baseline:   "FC_DL"
//   mismatch:   {"enabled": bool, "control": "RV-CER"}
//   training:   {"runs": R, "hyperparameters": {...}}
//   rollout:    {"paths": Ω, "horizon": ξ},  dlp_horizon: H
//   evaluation: {"instances": n, "days": d, "warmup": w, "seed": s}
//   output:     directory
struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<std::string> settings;
  std::vector<std::string> policies;
  std::string baseline = "FC_DL";
  bool mismatch = false;
  std::string mismatch_control = "RV-CER";
  vfa::Hyperparameters hp;
  int training_runs = 1;
  policies::RolloutParams rollout;
  int dlp_horizon = 5;
  int instances = 15;
  int days = 25;
  int warmup = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string output = "out";
};

ExperimentConfig preset(Scale scale);
// Applies the keys present in `j` on top of `base`; validates the result.
ExperimentConfig experiment_from_json(const nlohmann::json& j, ExperimentConfig base);
ExperimentConfig load_experiment(const std::string& path, Scale scale);
nlohmann::json experiment_to_json(const ExperimentConfig& x);  // without jobs and output

// FNV-1a over the canonical JSON; printed into every output file.
std::string experiment_hash(const ExperimentConfig& x);

// Problem config of one setting; the setting grid changes weights and
// pickup laws only.
ProblemConfig setting_config(const ExperimentConfig& x, const std::string& setting);
std::vector<std::string> setting_labels(const ExperimentConfig& x);

// The policy list in effect: in mismatch mode the baseline plus the
// control under all nine (allocation, feature) scheme pairs.
std::vector<std::string> effective_policies(const ExperimentConfig& x);

// Training seed of weight run r (0-based).
std::uint64_t training_seed(const ExperimentConfig& x, int run);

struct WeightKey {
  std::string setting;
  vfa::Variant variant = vfa::Variant::kCER;
  allocation::Scheme allocation = allocation::Scheme::kDL;
  allocation::Scheme features = allocation::Scheme::kDL;
  int run = 0;
};
std::vector<WeightKey> required_weights(const ExperimentConfig& x);
std::string weight_path(const ExperimentConfig& x, const WeightKey& k);

// Subcommands. Each returns the paths it wrote.
std::vector<std::string> cmd_generate(const ExperimentConfig& x);
// Trains every missing (or, with `force`, every) weight file.
std::vector<std::string> cmd_train(const ExperimentConfig& x, bool force = true);
struct EvaluateOutput {
  sim::EvaluationReport report;
  std::vector<std::string> files;
};
EvaluateOutput cmd_evaluate(const ExperimentConfig& x);

// Reads results.csv of an output directory and rebuilds the summary table.
struct ReportRow {
  std::string setting, policy;
  int instances = 0;
  double mean = 0.0, improvement = 0.0, p_greater = 1.0;
};
struct Report {
  std::string baseline;
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, double>> overall;  // policy -> mean improvement
};
Report cmd_report(const std::string& output_dir, const std::string& baseline = "FC_DL");
std::string format_report(const Report& r);

// table[feature][allocation] (DL, LD, BU order) of the overall improvement
// of `control`; absent cells stay empty.
using MismatchTable = std::array<std::array<std::optional<double>, 3>, 3>;
MismatchTable mismatch_table(const std::map<std::string, double>& overall, const std::string& control);
std::string format_mismatch(const MismatchTable& t);

// CSV writers with a leading "# experiment ..." provenance line.
std::string provenance_line(const ExperimentConfig& x);
void write_results_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r);
void write_rates_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r);
void write_occupancy_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r);
void write_summary_csv(const std::string& path, const ExperimentConfig& x, const sim::EvaluationReport& r);

}  // namespace locker::cli
