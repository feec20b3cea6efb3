#include "locker/policies/policies.hpp"

#include <stdexcept>

#include "locker/allocation/solver.hpp"
#include "locker/policies/dlp.hpp"
#include "locker/sim/world.hpp"
#include "locker/stochastic.hpp"

namespace locker::policies {

using allocation::Scheme;

namespace {

struct ControlInfo {
  Control control;
  const char* name;
  bool rollout;
  std::optional<vfa::Variant> variant;
};

const ControlInfo kControls[] = {
    {Control::kFC, "FC", false, std::nullopt},
    {Control::kDLP, "DLP", false, std::nullopt},
    {Control::kVTD, "V-TD", false, vfa::Variant::kTD},
    {Control::kVER, "V-ER", false, vfa::Variant::kER},
    {Control::kVCER, "V-CER", false, vfa::Variant::kCER},
    {Control::kR, "R", true, std::nullopt},
    {Control::kRVTD, "RV-TD", true, vfa::Variant::kTD},
    {Control::kRVER, "RV-ER", true, vfa::Variant::kER},
    {Control::kRVCER, "RV-CER", true, vfa::Variant::kCER},
};

const ControlInfo& info(Control c) {
  for (const auto& i : kControls)
    if (i.control == c) return i;
  throw std::logic_error("unknown control");
}

bool feasible(const ProblemConfig& cfg, const PreDecisionState& s) {
  return !s.request.none() && allocation::check_feasible(cfg, s.L, s.O, s.request);
}

std::uint64_t u64(int x) { return static_cast<std::uint64_t>(x); }

int uniform_int(double u, int lo, int hi) { return lo + std::min(hi - lo, static_cast<int>(u * (hi - lo + 1))); }

// Hidden ledger consistent with the post-decision state sx: tracked parcels
// draw their pickup from the residual law, pending orders draw fresh tags.
sim::World sample_world(const ProblemConfig& cfg, const PostDecisionState& sx, std::uint64_t base) {
  const int t = sx.slot;
  std::vector<sim::Parcel> parcels;
  for (int delta = 1; delta <= cfg.D; ++delta)
    for (int c = 1; c <= cfg.C; ++c)
      for (int h = 1; h <= cfg.B - 1; ++h) {
        const int n = sx.L(delta - 1, c - 1, h - 1);
        if (n == 0) continue;
        const auto law = residual_pickup_distribution(cfg, c, h, t);
        for (int k = 0; k < n; ++k) {
          const int beta =
              1 + sample_index(law, hashed_uniform(base, {0, u64(delta), u64(c), u64(h), u64(k)}));
          const double uq = hashed_uniform(base, {1, u64(delta), u64(c), u64(h), u64(k)});
          const int q = beta == h ? uniform_int(uq, t + 1, cfg.T) : uniform_int(uq, 1, cfg.T);
          parcels.push_back({delta, c, sx.day - h, beta, q});
        }
      }
  std::vector<sim::PendingOrder> orders;
  for (int f = 1; f <= cfg.F; ++f)
    for (int d = 1; d <= cfg.D; ++d)
      for (int c = 1; c <= cfg.C; ++c)
        for (int k = 0; k < sx.O(d - 1, c - 1, f - 1); ++k) {
          const PickupTag tag{hashed_uniform(base, {2, u64(d), u64(c), u64(f), u64(k), 0}),
                              hashed_uniform(base, {2, u64(d), u64(c), u64(f), u64(k), 1})};
          orders.push_back({d, c, sx.day + f - 1, tag});
        }
  return sim::World::from_post_decision(cfg, sx, std::move(parcels), std::move(orders));
}

// Reward collected by FC over the next rp.horizon epochs plus the terminal value.
double simulate_branch(const ProblemConfig& cfg, const PostDecisionState& sx, const Eigen::VectorXd& theta,
                       Scheme scheme, Scheme feature_scheme, int U, const RolloutParams& rp,
                       std::uint64_t epoch_seed, int path) {
  const std::uint64_t base = derive_seed(epoch_seed, {stream_key::kRollout, u64(path)});
  sim::World world = sample_world(cfg, sx, base);
  double reward = 0.0;
  long accepted = 0;
  for (int step = 1; step <= rp.horizon; ++step) {
    world.advance(sample_arrival(cfg, hashed_uniform(base, {3, u64(step)})));
    const PreDecisionState& s = world.state();
    if (world.at_allocation()) {
      world.allocate(allocation::decide_allocation(cfg, s.L, s.O, scheme));
      continue;
    }
    const int g = feasible(cfg, s) ? 1 : 0;
    PickupTag tag;
    if (g) {
      const auto k = static_cast<std::uint64_t>(accepted++);
      tag = {hashed_uniform(base, {4, k, 0}), hashed_uniform(base, {4, k, 1})};
      reward += cfg.weight(s.request.c);
    }
    world.decide(g, tag);
  }
  if (!theta.isZero(0.0)) {
    const auto phi = vfa::compute_features(cfg, world.post_state(), U,
                                           derive_seed(epoch_seed, {stream_key::kFeatures}), feature_scheme);
    reward += vfa::value_estimate(phi, theta);
  }
  return reward;
}

}  // namespace

Control parse_control(const std::string& name) {
  for (const auto& i : kControls)
    if (name == i.name) return i.control;
  throw std::invalid_argument("unknown demand control '" + name + "'");
}

const char* control_name(Control c) { return info(c).name; }
bool uses_weights(Control c) { return info(c).variant.has_value(); }
bool uses_rollout(Control c) { return info(c).rollout; }
std::optional<vfa::Variant> weight_variant(Control c) { return info(c).variant; }

std::string PolicyPair::name() const {
  std::string n = std::string(control_name(control)) + "_" + allocation::scheme_name(scheme);
  if (uses_weights(control) && feature_scheme != scheme) n += std::string("/") + allocation::scheme_name(feature_scheme);
  return n;
}

PolicyPair make_pair(const ProblemConfig& cfg, const std::string& descriptor,
                     const std::optional<vfa::WeightFile>& weights, bool mismatch) {
  const auto cut = descriptor.rfind('_');
  if (cut == std::string::npos) throw std::invalid_argument("policy descriptor needs CONTROL_SCHEME: " + descriptor);
  PolicyPair p;
  p.control = parse_control(descriptor.substr(0, cut));
  p.scheme = allocation::parse_scheme(descriptor.substr(cut + 1));
  p.feature_scheme = p.scheme;
  if (!uses_weights(p.control)) {
    p.theta = Eigen::VectorXd::Zero(cfg.feature_length());
    return p;
  }
  if (!weights) throw std::invalid_argument(descriptor + " needs a weight file");
  const auto& w = *weights;
  if (w.variant != vfa::variant_name(*weight_variant(p.control)))
    throw std::invalid_argument(descriptor + ": weights were trained as " + w.variant);
  if (allocation::parse_scheme(w.allocation_scheme) != p.scheme)
    throw std::invalid_argument(descriptor + ": weights were trained with allocation " + w.allocation_scheme);
  const Scheme fs = allocation::parse_scheme(w.feature_scheme);
  if (fs != p.scheme && !mismatch)
    throw std::invalid_argument(descriptor + ": weights use " + w.feature_scheme +
                                " features; pass the mismatch flag to combine schemes");
  if (w.theta.size() != cfg.feature_length()) throw std::invalid_argument(descriptor + ": weight length");
  if (!w.config_hash.empty() && w.config_hash != cfg.hash_hex())
    throw std::invalid_argument(descriptor + ": weights belong to another configuration");
  p.feature_scheme = fs;
  p.theta = w.theta;
  p.U = w.hp.U;
  return p;
}

int fc_decide(const ProblemConfig& cfg, const PreDecisionState& s) { return feasible(cfg, s) ? 1 : 0; }

int vfa_decide(const ProblemConfig& cfg, const PreDecisionState& s, const Eigen::VectorXd& theta,
               Scheme feature_scheme, int U, std::uint64_t epoch_seed) {
  if (!feasible(cfg, s)) return 0;
  const std::uint64_t seed = derive_seed(epoch_seed, {stream_key::kFeatures});
  const auto reject = vfa::compute_features(cfg, as_post_decision(s), U, seed, feature_scheme);
  const auto accept = vfa::compute_features(cfg, apply_demand_control(cfg, s, 1), U, seed, feature_scheme);
  return cfg.weight(s.request.c) + theta.dot(accept) >= theta.dot(reject) ? 1 : 0;
}

RolloutEstimate rollout_estimate(const ProblemConfig& cfg, const PreDecisionState& s, const Eigen::VectorXd& theta,
                                 Scheme scheme, Scheme feature_scheme, int U, const RolloutParams& rp,
                                 std::uint64_t epoch_seed) {
  if (rp.paths < 1 || rp.horizon < 0) throw std::invalid_argument("rollout needs paths >= 1, horizon >= 0");
  const PostDecisionState acc = apply_demand_control(cfg, s, 1), rej = as_post_decision(s);
  RolloutEstimate est;
  for (int w = 0; w < rp.paths; ++w) {
    est.accept += simulate_branch(cfg, acc, theta, scheme, feature_scheme, U, rp, epoch_seed, w);
    est.reject += simulate_branch(cfg, rej, theta, scheme, feature_scheme, U, rp, epoch_seed, w);
  }
  est.accept /= rp.paths;
  est.reject /= rp.paths;
  return est;
}

int rollout_decide(const ProblemConfig& cfg, const PreDecisionState& s, const Eigen::VectorXd& theta, Scheme scheme,
                   Scheme feature_scheme, int U, const RolloutParams& rp, std::uint64_t epoch_seed) {
  if (!feasible(cfg, s)) return 0;
  const auto est = rollout_estimate(cfg, s, theta, scheme, feature_scheme, U, rp, epoch_seed);
  return cfg.weight(s.request.c) + est.accept >= est.reject ? 1 : 0;
}

int decide(const ProblemConfig& cfg, const PolicyPair& pair, const PreDecisionState& s, std::uint64_t epoch_seed) {
  if (!feasible(cfg, s)) return 0;
  switch (pair.control) {
    case Control::kFC: return 1;
    case Control::kDLP: return dlp_decide(cfg, s, pair.dlp_horizon);
    case Control::kVTD:
    case Control::kVER:
    case Control::kVCER: return vfa_decide(cfg, s, pair.theta, pair.feature_scheme, pair.U, epoch_seed);
    default:
      return rollout_decide(cfg, s, pair.theta, pair.scheme, pair.feature_scheme, pair.U, pair.rollout, epoch_seed);
  }
}

AllocationMatrix allocate(const ProblemConfig& cfg, const PolicyPair& pair, const PreDecisionState& s) {
  return allocation::decide_allocation(cfg, s.L, s.O, pair.scheme);
}

}  // namespace locker::policies
