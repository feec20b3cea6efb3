#include "locker/vfa/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "locker/allocation/solver.hpp"
#include "locker/optim/qp.hpp"
#include "locker/sim/world.hpp"
#include "locker/stochastic.hpp"

namespace locker::vfa {

Variant parse_variant(const std::string& name) {
  if (name == "TD") return Variant::kTD;
  if (name == "ER") return Variant::kER;
  if (name == "CER") return Variant::kCER;
  throw std::invalid_argument("unknown VFA variant '" + name + "'");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kTD: return "TD";
    case Variant::kER: return "ER";
    case Variant::kCER: return "CER";
  }
  return "?";
}

Hyperparameters Hyperparameters::paper() { return {}; }

Hyperparameters Hyperparameters::scaled(int tau_max) {
  Hyperparameters h;
  const double r = tau_max / 2500.0;
  h.tau_max = tau_max;
  h.eps_decay_days = std::max(1, static_cast<int>(std::lround(1200 * r)));
  h.eta = std::max(1, static_cast<int>(std::lround(100 * r)));
  return h;
}

void to_json(nlohmann::json& j, const Hyperparameters& h) {
  j = {{"alpha_theta", h.alpha_theta}, {"alpha_r", h.alpha_r},       {"eps_start", h.eps_start},
       {"eps_end", h.eps_end},         {"eps_decay_days", h.eps_decay_days}, {"kappa", h.kappa},
       {"chi", h.chi},                 {"gamma", h.gamma},           {"eta", h.eta},
       {"zeta", h.zeta},               {"tau_max", h.tau_max},       {"U", h.U},
       {"init_days", h.init_days},     {"divergence_cap", h.divergence_cap},
       {"td_on_no_arrival", h.td_on_no_arrival}};
}

void from_json(const nlohmann::json& j, Hyperparameters& h) {
  Hyperparameters d;
  h.alpha_theta = j.value("alpha_theta", d.alpha_theta);
  h.alpha_r = j.value("alpha_r", d.alpha_r);
  h.eps_start = j.value("eps_start", d.eps_start);
  h.eps_end = j.value("eps_end", d.eps_end);
  h.eps_decay_days = j.value("eps_decay_days", d.eps_decay_days);
  h.kappa = j.value("kappa", d.kappa);
  h.chi = j.value("chi", d.chi);
  h.gamma = j.value("gamma", d.gamma);
  h.eta = j.value("eta", d.eta);
  h.zeta = j.value("zeta", d.zeta);
  h.tau_max = j.value("tau_max", d.tau_max);
  h.U = j.value("U", d.U);
  h.init_days = j.value("init_days", d.init_days);
  h.divergence_cap = j.value("divergence_cap", d.divergence_cap);
  h.td_on_no_arrival = j.value("td_on_no_arrival", d.td_on_no_arrival);
}

double td_update(TrainerState& tr, double reward, const FeatureVector& phi_prev, const FeatureVector& phi_new) {
  const double delta = reward - tr.reward_rate + tr.theta.dot(phi_new) - tr.theta.dot(phi_prev);
  tr.rho += tr.hp.alpha_r * (1.0 - tr.rho);
  tr.reward_rate += tr.hp.alpha_r / tr.rho * delta;
  tr.theta += tr.hp.alpha_theta * delta * phi_prev;
  ++tr.epochs;
  return delta;
}

void remember(TrainerState& tr, Experience e) {
  tr.memory.push_back(std::move(e));
  while (static_cast<int>(tr.memory.size()) > tr.hp.kappa) tr.memory.pop_front();
}

std::vector<int> sample_batch(int memory_size, int chi, std::mt19937_64& rng) {
  const int n = std::min(chi, memory_size);
  // partial Fisher-Yates: uniform over n-subsets
  std::vector<int> idx(memory_size);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(uniform(rng) * (memory_size - i));
    std::swap(idx[i], idx[std::min(j, memory_size - 1)]);
  }
  idx.resize(n);
  return idx;
}

std::vector<double> er_targets(const std::vector<const Experience*>& batch, const Eigen::VectorXd& theta,
                               double reward_rate) {
  std::vector<double> nu;
  nu.reserve(batch.size());
  for (const Experience* e : batch) {
    double v = -reward_rate + theta.dot(e->phi_reject);
    if (e->reward_accept) v = std::max(v, *e->reward_accept - reward_rate + theta.dot(e->phi_accept));
    nu.push_back(v);
  }
  return nu;
}

Eigen::MatrixXd structure_constraints(const ProblemConfig& cfg) {
  const int H = cfg.horizon_extended(), n = cfg.feature_length();
  std::vector<Eigen::VectorXd> rows;
  auto row = [&] { return Eigen::VectorXd::Zero(n).eval(); };
  for (int d = 1; d <= cfg.D; ++d)
    for (int l = 1; l <= H; ++l) {
      if (d > 1) {
        Eigen::VectorXd r = row();
        r(feature_index(cfg, d, l)) = 1.0;
        r(feature_index(cfg, d - 1, l)) = -1.0;
        rows.push_back(r);
      }
      if (l > 1) {
        Eigen::VectorXd r = row();
        r(feature_index(cfg, d, l)) = 1.0;
        r(feature_index(cfg, d, l - 1)) = -1.0;
        rows.push_back(r);
      }
      Eigen::VectorXd r = row();
      r(feature_index(cfg, d, l)) = 1.0;
      rows.push_back(r);
    }
  Eigen::MatrixXd G(rows.size(), n);
  for (size_t i = 0; i < rows.size(); ++i) G.row(i) = rows[i].transpose();
  return G;
}

void er_update(TrainerState& tr, const ProblemConfig& cfg, const std::vector<int>& batch, bool constrained) {
  if (batch.empty()) throw std::invalid_argument("empty replay batch");
  const int n = cfg.feature_length(), m = static_cast<int>(batch.size());
  std::vector<const Experience*> picked;
  for (int i : batch) picked.push_back(&tr.memory.at(i));
  const std::vector<double> nu = er_targets(picked, tr.theta, tr.reward_rate);

  Eigen::MatrixXd X(m, n);
  for (int i = 0; i < m; ++i) X.row(i) = picked[i]->phi0.transpose();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n), sd = Eigen::VectorXd::Ones(n);
  for (int j = 1; j < n; ++j) {
    mean(j) = X.col(j).mean();
    const double var = (X.col(j).array() - mean(j)).square().mean();
    if (std::sqrt(var) >= 1e-12) sd(j) = std::sqrt(var);
  }
  optim::RidgeProblem p;
  p.design = X;
  p.design.col(0).setOnes();
  for (int j = 1; j < n; ++j) p.design.col(j) = (X.col(j).array() - mean(j)) / sd(j);
  p.target = Eigen::Map<const Eigen::VectorXd>(nu.data(), m);
  p.gamma = tr.hp.gamma;
  p.penalized.assign(n, true);
  p.penalized[0] = false;
  if (constrained) {
    // θ_j = β_j / sd_j, so G θ >= 0 becomes (G diag(1/sd)) β >= 0.
    const Eigen::MatrixXd G = structure_constraints(cfg);
    p.constraint_matrix = G * sd.cwiseInverse().asDiagonal();
    p.constraint_rhs = Eigen::VectorXd::Zero(G.rows());
  } else {
    p.constraint_matrix.resize(0, n);
    p.constraint_rhs.resize(0);
  }
  const optim::QpResult r = optim::qp_ridge_constrained(p);
  Eigen::VectorXd theta(n);
  theta(0) = r.theta(0);
  for (int j = 1; j < n; ++j) {
    theta(j) = r.theta(j) / sd(j);
    theta(0) -= theta(j) * mean(j);
  }
  if (constrained)  // clear round-off below zero on the structural rows
    for (int j = 1; j < n; ++j) theta(j) = std::max(theta(j), 0.0);
  tr.theta = theta;
}

double epsilon_for_day(const Hyperparameters& hp, int day) {
  if (hp.eps_decay_days <= 1 || day >= hp.eps_decay_days) return hp.eps_end;
  const double frac = static_cast<double>(day - 1) / (hp.eps_decay_days - 1);
  return hp.eps_start + (hp.eps_end - hp.eps_start) * frac;
}

namespace {

void check_divergence(const TrainerState& tr, int day) {
  const double norm = tr.theta.norm();
  if (!(norm <= tr.hp.divergence_cap)) {
    std::ostringstream msg;
    msg << "VFA training diverged on day " << day << ": |theta| = " << norm << ", reward rate "
        << tr.reward_rate << ", theta = " << tr.theta.transpose();
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

TrainingResult train(const ProblemConfig& cfg, allocation::Scheme allocation_scheme,
                     allocation::Scheme feature_scheme, Variant variant, std::uint64_t seed,
                     const Hyperparameters& hp) {
  using stream_key::kFeatures;
  using stream_key::kTraining;
  TrainerState tr(cfg.feature_length(), hp);
  TrainingResult out;

  std::mt19937_64 arrivals(derive_seed(seed, {kTraining, 1}));
  std::mt19937_64 choices(derive_seed(seed, {kTraining, 2}));
  const std::uint64_t tag_base = derive_seed(seed, {kTraining, 3});
  long accepted = 0;
  auto next_tag = [&] {
    const auto k = static_cast<std::uint64_t>(accepted++);
    return PickupTag{hashed_uniform(tag_base, {k, 0}), hashed_uniform(tag_base, {k, 1})};
  };
  auto draw = [&] { return sample_arrival(cfg, uniform(arrivals)); };

  sim::World world(cfg, initial_state(cfg, draw()));
  auto end_of_day = [&] {
    const PreDecisionState& s = world.state();
    world.allocate(allocation::decide_allocation(cfg, s.L, s.O, allocation_scheme));
  };
  for (int day = 1; day <= hp.init_days; ++day) {
    for (int t = 1; t <= cfg.T; ++t) {
      const PreDecisionState& s = world.state();
      const bool ok = !s.request.none() && allocation::check_feasible(cfg, s.L, s.O, s.request);
      world.decide(ok ? 1 : 0, ok ? next_tag() : PickupTag{});
      world.advance(t < cfg.T ? draw() : kNoArrival);
    }
    end_of_day();
    world.advance(draw());
  }

  long n = 0;
  auto features = [&](const PostDecisionState& sx) {
    return compute_features(cfg, sx, hp.U, derive_seed(seed, {kFeatures, static_cast<std::uint64_t>(n)}),
                            feature_scheme);
  };
  FeatureVector phi_prev = features(world.state().day == 1 && hp.init_days == 0
                                        ? PostDecisionState{0, cfg.T + 1, world.state().L, world.state().O}
                                        : world.post_state());
  const FeatureVector zero = FeatureVector::Zero(cfg.feature_length());

  for (int day = 1; day <= hp.tau_max; ++day) {
    const double eps = epsilon_for_day(hp, day);
    for (int t = 1; t <= cfg.T; ++t) {
      ++n;
      const PreDecisionState& s = world.state();
      const FeatureVector phi_reject = features(as_post_decision(s));
      const bool feasible = !s.request.none() && allocation::check_feasible(cfg, s.L, s.O, s.request);
      FeatureVector phi_accept = zero;
      std::optional<double> reward_accept;
      int g = 0;
      if (feasible) {
        phi_accept = features(apply_demand_control(cfg, s, 1));
        reward_accept = cfg.weight(s.request.c);
        if (uniform(choices) < eps)
          g = uniform(choices) < 0.5 ? 1 : 0;
        else
          g = *reward_accept + tr.theta.dot(phi_accept) >= tr.theta.dot(phi_reject) ? 1 : 0;
      }
      const FeatureVector& phi_new = g ? phi_accept : phi_reject;
      if (!s.request.none() || hp.td_on_no_arrival) {
        td_update(tr, g ? *reward_accept : 0.0, phi_prev, phi_new);
        ++out.log.td_updates;
        remember(tr, {phi_prev, phi_reject, phi_accept, reward_accept});
      }
      if (g) out.log.accepted_reward += *reward_accept;
      phi_prev = phi_new;
      world.decide(g, g ? next_tag() : PickupTag{});
      world.advance(t < cfg.T ? draw() : kNoArrival);
    }
    ++n;
    end_of_day();
    phi_prev = features(world.post_state());
    world.advance(draw());

    if (variant != Variant::kTD && day > hp.eta && day % hp.zeta == 0 && !tr.memory.empty()) {
      const auto batch = sample_batch(static_cast<int>(tr.memory.size()), hp.chi, choices);
      er_update(tr, cfg, batch, variant == Variant::kCER);
      ++out.log.er_updates;
      out.log.theta_snapshots.push_back(tr.theta);
    }
    check_divergence(tr, day);
    out.log.reward_rate_by_day.push_back(tr.reward_rate);
  }
  out.theta = tr.theta;
  out.reward_rate = tr.reward_rate;
  return out;
}

nlohmann::json weights_to_json(const ProblemConfig& cfg, const WeightFile& w) {
  nlohmann::json theta = nlohmann::json::array();
  for (int d = 1; d <= cfg.D; ++d) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 1; l <= cfg.horizon_extended(); ++l) row.push_back(w.theta(feature_index(cfg, d, l)));
    theta.push_back(row);
  }
  return {{"allocation_scheme", w.allocation_scheme},
          {"feature_scheme", w.feature_scheme},
          {"variant", w.variant},
          {"seed", w.seed},
          {"config_hash", w.config_hash},
          {"hyperparameters", w.hp},
          {"theta0", w.theta(0)},
          {"theta", theta},
          {"reward_rate", w.reward_rate}};
}

WeightFile weights_from_json(const ProblemConfig& cfg, const nlohmann::json& j) {
  WeightFile w;
  w.allocation_scheme = j.at("allocation_scheme").get<std::string>();
  w.feature_scheme = j.value("feature_scheme", w.allocation_scheme);
  w.variant = j.at("variant").get<std::string>();
  w.seed = j.value("seed", std::uint64_t{0});
  w.config_hash = j.value("config_hash", std::string{});
  if (j.contains("hyperparameters")) w.hp = j.at("hyperparameters").get<Hyperparameters>();
  w.reward_rate = j.value("reward_rate", 0.0);
  w.theta = Eigen::VectorXd::Zero(cfg.feature_length());
  w.theta(0) = j.at("theta0").get<double>();
  const auto& rows = j.at("theta");
  if (static_cast<int>(rows.size()) != cfg.D) throw std::invalid_argument("weights: wrong number of sizes");
  for (int d = 1; d <= cfg.D; ++d) {
    if (static_cast<int>(rows[d - 1].size()) != cfg.horizon_extended())
      throw std::invalid_argument("weights: wrong window horizon");
    for (int l = 1; l <= cfg.horizon_extended(); ++l)
      w.theta(feature_index(cfg, d, l)) = rows[d - 1][l - 1].get<double>();
  }
  return w;
}

}  // namespace locker::vfa
