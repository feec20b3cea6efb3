#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "locker/allocation/cfa.hpp"
#include "locker/vfa/features.hpp"

namespace locker::vfa {

enum class Variant { kTD, kER, kCER };

Variant parse_variant(const std::string& name);  // "TD", "ER", "CER"
const char* variant_name(Variant v);

struct Hyperparameters {
  double alpha_theta = 0.001;
  double alpha_r = 0.001;
  double eps_start = 1.0;
  double eps_end = 0.1;
  int eps_decay_days = 1200;  // ε reaches eps_end on this day
  int kappa = 10000;          // replay memory
  int chi = 4000;             // batch size
  double gamma = 4.0;         // ridge weight
  int eta = 100;              // first day with replay
  int zeta = 5;               // replay every zeta days
  int tau_max = 2500;
  int U = 10;                 // feature scenarios
  int init_days = 5;          // FC days that build the initial post-decision state
  double divergence_cap = 1e8;
  bool td_on_no_arrival = true;  // NoArrival slots update with R = 0, g = 0

  // The paper's calibration, with day counts scaled to tau_max days.
  static Hyperparameters paper();
  static Hyperparameters scaled(int tau_max);
};

void to_json(nlohmann::json& j, const Hyperparameters& h);
void from_json(const nlohmann::json& j, Hyperparameters& h);

// One replayable demand-control epoch. An absent reward_accept stands for an
// infeasible request (reward -inf); phi_accept is then the zero vector.
struct Experience {
  FeatureVector phi0;
  FeatureVector phi_reject;
  FeatureVector phi_accept;
  std::optional<double> reward_accept;
};

struct TrainerState {
  Eigen::VectorXd theta;
  double reward_rate = 0.0;
  double rho = 0.0;
  std::deque<Experience> memory;
  long epochs = 0;
  Hyperparameters hp;

  TrainerState(int features, const Hyperparameters& h)
      : theta(Eigen::VectorXd::Zero(features)), hp(h) {}
};

// Average-reward TD step; returns the TD error.
double td_update(TrainerState& tr, double reward, const FeatureVector& phi_prev, const FeatureVector& phi_new);

void remember(TrainerState& tr, Experience e);

// Simple random sample without replacement of min(chi, |memory|) indices.
std::vector<int> sample_batch(int memory_size, int chi, std::mt19937_64& rng);

std::vector<double> er_targets(const std::vector<const Experience*>& batch, const Eigen::VectorXd& theta,
                               double reward_rate);

// Rows of G with G θ >= 0: θ nondecreasing in size and in length, and θ >= 0
// (intercept excluded). Adjacent pairs imply the full pairwise system.
Eigen::MatrixXd structure_constraints(const ProblemConfig& cfg);

// Ridge fit of the targets on standardized φ0; replaces θ.
void er_update(TrainerState& tr, const ProblemConfig& cfg, const std::vector<int>& batch, bool constrained);

double epsilon_for_day(const Hyperparameters& hp, int day);

struct TrainingLog {
  std::vector<double> reward_rate_by_day;
  std::vector<Eigen::VectorXd> theta_snapshots;  // after every replay update
  long er_updates = 0;
  long td_updates = 0;
  double accepted_reward = 0.0;
};

struct TrainingResult {
  Eigen::VectorXd theta;
  double reward_rate = 0.0;
  TrainingLog log;
};

// Algorithm: ε-greedy simulated days, TD after every request slot, replay
// at the end of day τ when τ > η and τ mod ζ = 0 (not for kTD). The features
// use `feature_scheme`, allocations use `allocation_scheme`.
TrainingResult train(const ProblemConfig& cfg, allocation::Scheme allocation_scheme,
                     allocation::Scheme feature_scheme, Variant variant, std::uint64_t seed,
                     const Hyperparameters& hp);

// Weight documents.
struct WeightFile {
  std::string allocation_scheme;
  std::string feature_scheme;
  std::string variant;
  std::uint64_t seed = 0;
  std::string config_hash;
  Hyperparameters hp;
  Eigen::VectorXd theta;
  double reward_rate = 0.0;
};

nlohmann::json weights_to_json(const ProblemConfig& cfg, const WeightFile& w);
WeightFile weights_from_json(const ProblemConfig& cfg, const nlohmann::json& j);

}  // namespace locker::vfa
