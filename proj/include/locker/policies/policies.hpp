#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "locker/allocation/cfa.hpp"
#include "locker/state.hpp"
#include "locker/vfa/training.hpp"

namespace locker::policies {

enum class Control { kFC, kDLP, kVTD, kVER, kVCER, kR, kRVTD, kRVER, kRVCER };

Control parse_control(const std::string& name);  // "FC", "DLP", "V-TD", ..., "RV-CER"
const char* control_name(Control c);
bool uses_weights(Control c);
bool uses_rollout(Control c);
std::optional<vfa::Variant> weight_variant(Control c);

struct RolloutParams {
  int paths = 5;    // Ω
  int horizon = 5;  // ξ epochs, the allocation epoch counts as one
};

struct PolicyPair {
  Control control = Control::kFC;
  allocation::Scheme scheme = allocation::Scheme::kDL;   // allocation
  allocation::Scheme feature_scheme = allocation::Scheme::kDL;
  Eigen::VectorXd theta;  // empty unless uses_weights
  int U = 10;
  RolloutParams rollout;
  int dlp_horizon = 5;

  // "RV-CER_LD"; mismatched pairs append the feature scheme, "RV-CER_LD/DL".
  std::string name() const;
};

// Descriptor like "V-CER_DL". Weighted controls need `weights`, recorded
// under the same allocation scheme; the feature scheme must match too unless
// `mismatch` is set.
PolicyPair make_pair(const ProblemConfig& cfg, const std::string& descriptor,
                     const std::optional<vfa::WeightFile>& weights = std::nullopt, bool mismatch = false);

// Policy pieces. All return 0 for NoArrival and infeasible requests.
int fc_decide(const ProblemConfig& cfg, const PreDecisionState& s);
int vfa_decide(const ProblemConfig& cfg, const PreDecisionState& s, const Eigen::VectorXd& theta,
               allocation::Scheme feature_scheme, int U, std::uint64_t epoch_seed);

// Branch estimates of the rollout, exposed for tests. The request must be feasible.
struct RolloutEstimate {
  double accept = 0.0;  // excludes the immediate reward m_c
  double reject = 0.0;
};
RolloutEstimate rollout_estimate(const ProblemConfig& cfg, const PreDecisionState& s, const Eigen::VectorXd& theta,
                                 allocation::Scheme scheme, allocation::Scheme feature_scheme, int U,
                                 const RolloutParams& rp, std::uint64_t epoch_seed);
int rollout_decide(const ProblemConfig& cfg, const PreDecisionState& s, const Eigen::VectorXd& theta,
                   allocation::Scheme scheme, allocation::Scheme feature_scheme, int U, const RolloutParams& rp,
                   std::uint64_t epoch_seed);

// Demand control of a pair; `epoch_seed` keys all sampling of this epoch.
int decide(const ProblemConfig& cfg, const PolicyPair& pair, const PreDecisionState& s, std::uint64_t epoch_seed);

AllocationMatrix allocate(const ProblemConfig& cfg, const PolicyPair& pair, const PreDecisionState& s);

}  // namespace locker::policies
