#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locker/sim/episode.hpp"

namespace locker::sim {

// Relative improvement in percent.
double improvement(double policy_mean, double baseline_mean);

enum class Slicer { kCustomer, kCustomerLead, kCustomerSize };
const char* slicer_name(Slicer s);  // "c", "c_e", "c_d"

// Cell label -> accepted / requests over measured requests. Cells without
// requests are absent.
std::map<std::string, double> acceptance_rates(const std::vector<const EpisodeResult*>& results, Slicer slicer);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;  // t-based interval
  double ci_high = 0.0;
};
Summary summarize(const std::vector<double>& x, double level = 0.99);

struct TTest {
  double t = 0.0;
  int df = 0;
  double p_greater = 1.0;  // one-sided, H1: mean difference > 0
};
TTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// One row of the policy grid: a display name and one pair per trained
// weight set (a single pair for weight-free controls).
struct PolicyEntry {
  std::string name;
  std::vector<policies::PolicyPair> variants;
};

struct SettingEntry {
  ProblemConfig cfg;
  std::vector<PolicyEntry> policies;
};

struct EvaluationSpec {
  std::vector<SettingEntry> settings;
  std::string baseline = "FC_DL";
  int instances = 30;
  int days = 40;
  int warmup = 10;
  std::uint64_t master_seed = 1;
  int jobs = 1;
};

struct InstanceRow {
  std::string setting, policy;
  std::uint64_t instance = 0;
  double weighted_objective = 0.0;  // mean over weight sets
  double accepted = 0.0;
  long requests = 0;
};

struct RateRow {
  std::string setting, policy, slicer, cell;
  double rate = 0.0;
};

struct OccupancyRow {
  std::string setting, policy;
  int day = 1, slot = 1;
  double occupied = 0.0, pending = 0.0;  // means over instances and weight sets
};

struct PolicySummary {
  std::string setting, policy;
  Summary objective;
  double improvement = 0.0;  // vs baseline, same setting
  TTest test;                // per-instance objective vs baseline
};

struct EvaluationReport {
  std::vector<InstanceRow> results;
  std::vector<RateRow> rates;
  std::vector<OccupancyRow> occupancy;
  std::vector<PolicySummary> summaries;
  std::map<std::string, double> overall_improvement;  // averaged across settings
};

// Runs every (setting, policy, weight set, instance) episode on `jobs`
// threads. Results do not depend on `jobs` or on the order of policies.
EvaluationReport evaluate(const EvaluationSpec& spec);

}  // namespace locker::sim
