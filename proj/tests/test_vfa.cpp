#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "locker/oracles/states.hpp"
#include "locker/optim/ilp.hpp"
#include "locker/vfa/training.hpp"

using namespace locker;
using namespace locker::vfa;
using allocation::Scheme;

namespace {

ProblemConfig single_locker(std::vector<double> pickup) {
  ProblemConfig c;
  c.name = "single";
  c.D = 1;
  c.C = 1;
  c.T = 3;
  c.B = static_cast<int>(pickup.size());
  c.E = 2;
  c.F = 2;
  c.Q = {1};
  c.m = {1.0};
  c.customer_prob = {0.9};
  c.size_prob = {{1.0}};
  c.lead_prob = {{0.5, 0.5}};
  c.pickup = {std::move(pickup)};
  c.validate();
  return c;
}

PostDecisionState post_of(const PreDecisionState& s) { return as_post_decision(s); }

Hyperparameters quick(int days) {
  Hyperparameters h = Hyperparameters::scaled(days);
  h.U = 2;
  h.init_days = 2;
  h.eta = 2;
  h.zeta = 2;
  h.chi = 40;
  h.kappa = 200;
  return h;
}

}  // namespace

TEST(Features, LengthOnMainConfig) {
  EXPECT_EQ(main_config().feature_length(), 22);
  EXPECT_EQ(feature_index(main_config(), 1, 1), 1);
  EXPECT_EQ(feature_index(main_config(), 3, 7), 21);
}

TEST(Features, EmptySystemHasOnlyFullWindows) {
  const ProblemConfig cfg = main_config("3pu");
  const PostDecisionState sx{1, 0, empty_occupancy(cfg), empty_orders(cfg)};
  const FeatureVector phi = compute_features(cfg, sx, 10, 42, Scheme::kDL);
  const int H = cfg.horizon_extended();
  EXPECT_EQ(phi(0), 1.0);
  for (int d = 1; d <= cfg.D; ++d)
    for (int l = 1; l <= H; ++l)
      EXPECT_EQ(phi(feature_index(cfg, d, l)), l == H ? cfg.capacity(d) : 0.0) << d << " " << l;
}

// One order allocated tonight (f = 1) and collected the next day frees the
// compartment from epoch 2 on: one window of length 2.
TEST(Features, SingleOrderHandWalk) {
  const ProblemConfig cfg = single_locker({1.0, 0.0});
  SampledPickups sp(cfg);
  sp.O(1, 1, 1, 1) = 1;
  const auto w = scenario_windows(cfg, sp, Scheme::kDL);
  ASSERT_EQ(w[0].size(), 3u);
  EXPECT_EQ(w[0][0], 0);
  EXPECT_EQ(w[0][1], 1);
  EXPECT_EQ(w[0][2], 0);

  Orders O = empty_orders(cfg);
  O(0, 0, 0) = 1;
  const FeatureVector phi = compute_features(cfg, {1, 2, empty_occupancy(cfg), O}, 5, 9, Scheme::kDL);
  EXPECT_EQ(phi(feature_index(cfg, 1, 2)), 1.0);
  EXPECT_EQ(phi(feature_index(cfg, 1, 1)) + phi(feature_index(cfg, 1, 3)), 0.0);
}

TEST(Features, ResidualSlotAfterAllocation) {
  const ProblemConfig cfg = toy_config();
  PostDecisionState sx{3, cfg.T + 1, empty_occupancy(cfg), empty_orders(cfg)};
  EXPECT_EQ(residual_slot(cfg, sx), 0);
  sx.slot = 4;
  EXPECT_EQ(residual_slot(cfg, sx), 4);
}

TEST(Features, TrackedParcelsRespectDwell) {
  const ProblemConfig cfg = toy_config();
  for (const auto& s : oracle::random_reachable_states(cfg, 21, 30)) {
    const SampledPickups sp = sample_pickups(cfg, post_of(s), 77, 0);
    for (int delta = 1; delta <= cfg.D; ++delta)
      for (int c = 1; c <= cfg.C; ++c)
        for (int h = 1; h <= cfg.B - 1; ++h) {
          int n = 0;
          for (int beta = 1; beta <= cfg.B; ++beta) {
            if (beta < h) EXPECT_EQ(sp.L(delta, c, h, beta), 0);
            n += sp.L(delta, c, h, beta);
          }
          EXPECT_EQ(n, s.L(delta - 1, c - 1, h - 1));
        }
  }
}

TEST(Features, CompactMatchesVerbatimModel) {
  const ProblemConfig cfg = toy_config();
  int u = 0;
  for (const auto& s : oracle::random_reachable_states(cfg, 22, 20))
    for (Scheme scheme : {Scheme::kDL, Scheme::kLD, Scheme::kBU}) {
      const SampledPickups sp = sample_pickups(cfg, post_of(s), 5, u++);
      const auto sol = allocation::solve_plan(feature_problem(cfg, sp, scheme));
      ASSERT_TRUE(sol.feasible);
      const FeatureModel fm = feature_model(cfg, sp, scheme);
      const auto r = optim::ilp_solve(fm.model);
      ASSERT_EQ(r.status, optim::IlpStatus::kOptimal) << describe(s.L, s.O);
      EXPECT_NEAR(sol.objective, r.objective, 1e-9) << allocation::scheme_name(scheme) << " " << describe(s.L, s.O);
      // the compact windows score the same in the verbatim model
      const auto w = allocation::count_windows(sol.free);
      allocation::WindowCounts wv(cfg.D, std::vector<int>(cfg.horizon_extended()));
      for (int d = 0; d < cfg.D; ++d)
        for (int l = 0; l < cfg.horizon_extended(); ++l) wv[d][l] = static_cast<int>(std::lround(r.values[fm.w[d][l]]));
      if (scheme != Scheme::kBU) {
        EXPECT_EQ(allocation::primary_value(scheme, w), allocation::primary_value(scheme, wv));
        EXPECT_EQ(allocation::secondary_value(scheme, w), allocation::secondary_value(scheme, wv));
      }
    }
}

TEST(Features, DeterministicAndSeedSensitive) {
  const ProblemConfig cfg = toy_config();
  const auto states = oracle::random_reachable_states(cfg, 23, 10);
  bool any_diff = false;
  for (const auto& s : states) {
    const FeatureVector a = compute_features(cfg, post_of(s), 4, 1000, Scheme::kDL);
    const FeatureVector b = compute_features(cfg, post_of(s), 4, 1000, Scheme::kDL);
    EXPECT_EQ(a, b);
    any_diff |= a != compute_features(cfg, post_of(s), 4, 1001, Scheme::kDL);
  }
  EXPECT_TRUE(any_diff);
}

TEST(Features, WindowTotalsBoundedByCapacity) {
  const ProblemConfig cfg = toy_config();
  for (const auto& s : oracle::random_reachable_states(cfg, 24, 20)) {
    const FeatureVector phi = compute_features(cfg, post_of(s), 3, 8, Scheme::kLD);
    for (int d = 1; d <= cfg.D; ++d) {
      double covered = 0;
      for (int l = 1; l <= cfg.horizon_extended(); ++l) covered += l * phi(feature_index(cfg, d, l));
      EXPECT_LE(covered, cfg.capacity(d) * cfg.horizon_extended() + 1e-9);
      EXPECT_GE(phi(feature_index(cfg, d, cfg.horizon_extended())), 0.0);
    }
  }
}

TEST(Training, TdUpdateHandTrace) {
  Hyperparameters hp;
  hp.alpha_theta = 0.1;
  hp.alpha_r = 0.5;
  TrainerState tr(3, hp);
  FeatureVector p0(3), p1(3);
  p0 << 1, 2, 0;
  p1 << 1, 0, 1;
  // Δ = 1, ρ = 0.5, R̄ = 0 + (0.5/0.5)·1 = 1, θ = 0.1·p0
  EXPECT_DOUBLE_EQ(td_update(tr, 1.0, p0, p1), 1.0);
  EXPECT_DOUBLE_EQ(tr.rho, 0.5);
  EXPECT_DOUBLE_EQ(tr.reward_rate, 1.0);
  EXPECT_NEAR(tr.theta(0), 0.1, 1e-15);
  EXPECT_NEAR(tr.theta(1), 0.2, 1e-15);
  // θ·p0 = 0.5, θ·p1 = 0.1: Δ = 0 - 1 + 0.5 - 0.1 = -0.6; ρ = 0.75;
  // R̄ = 1 - (0.5/0.75)·0.6 = 0.6; θ += 0.1·(-0.6)·p1
  EXPECT_NEAR(td_update(tr, 0.0, p1, p0), -0.6, 1e-12);
  EXPECT_DOUBLE_EQ(tr.rho, 0.75);
  EXPECT_NEAR(tr.reward_rate, 0.6, 1e-12);
  EXPECT_NEAR(tr.theta(0), 0.04, 1e-12);
  EXPECT_NEAR(tr.theta(1), 0.2, 1e-12);
  EXPECT_NEAR(tr.theta(2), -0.06, 1e-12);
}

TEST(Training, ReplayTargets) {
  Eigen::VectorXd theta(2);
  theta << 1.0, 2.0;
  FeatureVector rej(2), acc(2), zero = FeatureVector::Zero(2);
  rej << 1, 3;
  acc << 1, 1;
  const Experience feasible{zero, rej, acc, 5.0};
  const Experience infeasible{zero, rej, zero, std::nullopt};
  const Experience low{zero, rej, acc, 1.0};
  const auto nu = er_targets({&feasible, &infeasible, &low}, theta, 0.5);
  EXPECT_DOUBLE_EQ(nu[0], std::max(5.0 - 0.5 + 3.0, -0.5 + 7.0));
  EXPECT_DOUBLE_EQ(nu[1], -0.5 + 7.0);  // an infeasible accept never wins
  EXPECT_DOUBLE_EQ(nu[2], 6.5);
}

TEST(Training, ReplayMemoryEvictsOldest) {
  Hyperparameters hp;
  hp.kappa = 3;
  TrainerState tr(1, hp);
  for (int i = 0; i < 5; ++i) remember(tr, {FeatureVector::Constant(1, i), {}, {}, std::nullopt});
  ASSERT_EQ(tr.memory.size(), 3u);
  EXPECT_EQ(tr.memory.front().phi0(0), 2.0);
  EXPECT_EQ(tr.memory.back().phi0(0), 4.0);
}

TEST(Training, BatchSamplingIsUniformWithoutReplacement) {
  std::mt19937_64 rng(5);
  const int M = 20, chi = 5, reps = 20000;
  std::vector<int> count(M, 0);
  for (int r = 0; r < reps; ++r) {
    auto b = sample_batch(M, chi, rng);
    ASSERT_EQ(static_cast<int>(b.size()), chi);
    std::sort(b.begin(), b.end());
    EXPECT_EQ(std::adjacent_find(b.begin(), b.end()), b.end());
    for (int i : b) ++count[i];
  }
  const double expected = double(reps) * chi / M;
  double chi2 = 0;
  for (int c : count) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 43.82);  // χ²(19) at 0.999
  EXPECT_EQ(sample_batch(3, 10, rng).size(), 3u);
}

// Unconstrained replay equals a plain ridge fit on standardized columns with
// a free intercept, solved here from the normal equations.
TEST(Training, ReplayMatchesRidgeNormalEquations) {
  const ProblemConfig cfg = single_locker({0.5, 0.5});
  const int n = cfg.feature_length();
  Hyperparameters hp;
  hp.gamma = 4.0;
  TrainerState tr(n, hp);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int i = 0; i < 30; ++i) {
    FeatureVector p(n), r(n), a(n);
    p(0) = r(0) = a(0) = 1.0;
    for (int j = 1; j < n; ++j) p(j) = 2 + N(rng), r(j) = N(rng), a(j) = N(rng);
    p(n - 1) = 3.0;  // constant column: centered only
    remember(tr, {p, r, a, i % 3 ? std::optional<double>(1.0) : std::nullopt});
  }
  tr.theta = Eigen::VectorXd::Constant(n, 0.3);
  tr.reward_rate = 0.2;
  std::vector<int> all(30);
  std::iota(all.begin(), all.end(), 0);
  std::vector<const Experience*> ptr;
  for (auto& e : tr.memory) ptr.push_back(&e);
  const auto nu = er_targets(ptr, tr.theta, tr.reward_rate);

  Eigen::MatrixXd X(30, n);
  for (int i = 0; i < 30; ++i) X.row(i) = tr.memory[i].phi0.transpose();
  Eigen::VectorXd mu = X.colwise().mean().transpose(), sd = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd Z = X;
  for (int j = 1; j < n; ++j) {
    const double s = std::sqrt((X.col(j).array() - mu(j)).square().mean());
    if (s > 1e-12) sd(j) = s;
    Z.col(j) = (X.col(j).array() - mu(j)) / sd(j);
  }
  Eigen::MatrixXd P = hp.gamma * Eigen::MatrixXd::Identity(n, n);
  P(0, 0) = 0;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(nu.data(), 30);
  const Eigen::VectorXd beta = (Z.transpose() * Z + P).ldlt().solve(Z.transpose() * y);

  er_update(tr, cfg, all, false);
  const Eigen::VectorXd pred = X * tr.theta, ref = Z * beta;
  EXPECT_LT((pred - ref).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(tr.theta(n - 1), 0.0, 1e-12);
}

TEST(Training, ConstrainedReplayIsMonotone) {
  const ProblemConfig cfg = toy_config();
  const int n = cfg.feature_length();
  Hyperparameters hp;
  TrainerState tr(n, hp);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(n);
  for (int j = 1; j < n; ++j) bad(j) = (n - j) * (j % 2 ? 1.0 : -1.0);
  for (int i = 0; i < 60; ++i) {
    FeatureVector p(n);
    p(0) = 1;
    for (int j = 1; j < n; ++j) p(j) = std::abs(N(rng)) * 2;
    // targets favour decreasing, partly negative weights
    FeatureVector r = p;
    remember(tr, {p, r, FeatureVector::Zero(n), std::nullopt});
  }
  tr.theta = bad;
  std::vector<int> all(60);
  std::iota(all.begin(), all.end(), 0);
  TrainerState free_tr = tr;
  er_update(free_tr, cfg, all, false);
  er_update(tr, cfg, all, true);
  const Eigen::VectorXd g = structure_constraints(cfg) * tr.theta;
  EXPECT_GE(g.minCoeff(), -1e-9);
  EXPECT_LT((structure_constraints(cfg) * free_tr.theta).minCoeff(), -1e-3);  // the constraint binds
}

TEST(Training, StructureConstraintRows) {
  const ProblemConfig cfg = toy_config();
  const Eigen::MatrixXd G = structure_constraints(cfg);
  const int H = cfg.horizon_extended();
  // size pairs + length pairs + sign rows
  EXPECT_EQ(G.rows(), (cfg.D - 1) * H + cfg.D * (H - 1) + cfg.D * H);
  EXPECT_EQ(G.col(0).cwiseAbs().sum(), 0.0);
}

TEST(Training, EpsilonSchedule) {
  const Hyperparameters hp = Hyperparameters::paper();
  EXPECT_DOUBLE_EQ(epsilon_for_day(hp, 1), 1.0);
  EXPECT_DOUBLE_EQ(epsilon_for_day(hp, 1200), 0.1);
  EXPECT_DOUBLE_EQ(epsilon_for_day(hp, 2500), 0.1);
  EXPECT_NEAR(epsilon_for_day(hp, 600), 1.0 - 0.9 * 599 / 1199.0, 1e-12);
  const Hyperparameters d = Hyperparameters::scaled(300);
  EXPECT_EQ(d.eps_decay_days, 144);
  EXPECT_EQ(d.eta, 12);
  EXPECT_EQ(d.kappa, 10000);
  EXPECT_EQ(d.chi, 4000);
}

TEST(Training, NoDaysGivesZeroWeights) {
  Hyperparameters hp = quick(0);
  const auto r = train(tiny_config(), Scheme::kDL, Scheme::kDL, Variant::kCER, 1, hp);
  EXPECT_EQ(r.theta, Eigen::VectorXd::Zero(tiny_config().feature_length()));
  EXPECT_TRUE(r.log.reward_rate_by_day.empty());
}

TEST(Training, FrozenWeightsStillTrackReward) {
  Hyperparameters hp = quick(30);
  hp.alpha_theta = 0.0;
  hp.alpha_r = 0.05;
  const auto r = train(tiny_config(), Scheme::kDL, Scheme::kDL, Variant::kTD, 2, hp);
  EXPECT_EQ(r.theta, Eigen::VectorXd::Zero(tiny_config().feature_length()));
  EXPECT_GT(r.reward_rate, 0.0);
  EXPECT_EQ(r.log.er_updates, 0);
  EXPECT_EQ(r.log.td_updates, 30 * tiny_config().T);
}

TEST(Training, DeterministicAndReplays) {
  const Hyperparameters hp = quick(12);
  const auto a = train(toy_config(), Scheme::kDL, Scheme::kDL, Variant::kCER, 7, hp);
  const auto b = train(toy_config(), Scheme::kDL, Scheme::kDL, Variant::kCER, 7, hp);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.reward_rate, b.reward_rate);
  EXPECT_EQ(a.log.er_updates, 5);  // days 4, 6, ..., 12
  EXPECT_TRUE(std::isfinite(a.theta.norm()));
  EXPECT_GE((structure_constraints(toy_config()) * a.theta).minCoeff(), -1e-9);
  const auto c = train(toy_config(), Scheme::kDL, Scheme::kDL, Variant::kCER, 8, hp);
  EXPECT_NE(a.theta, c.theta);
}

TEST(Training, DivergenceIsReported) {
  Hyperparameters hp = quick(20);
  hp.alpha_theta = 5.0;
  hp.divergence_cap = 10.0;
  EXPECT_THROW(train(toy_config(), Scheme::kDL, Scheme::kDL, Variant::kTD, 3, hp), std::runtime_error);
}

TEST(Training, WeightFileRoundTrip) {
  const ProblemConfig cfg = toy_config();
  WeightFile w;
  w.allocation_scheme = "LD";
  w.feature_scheme = "DL";
  w.variant = "CER";
  w.seed = 0xFFFFFFFFFFFFFFFFull;
  w.config_hash = cfg.hash_hex();
  w.hp = quick(17);
  w.theta = Eigen::VectorXd::LinSpaced(cfg.feature_length(), -1.0 / 3, 2.0 / 7);
  w.reward_rate = 0.1 + 0.2;
  const WeightFile back = weights_from_json(cfg, nlohmann::json::parse(weights_to_json(cfg, w).dump()));
  EXPECT_EQ(back.theta, w.theta);
  EXPECT_EQ(back.reward_rate, w.reward_rate);
  EXPECT_EQ(back.seed, w.seed);
  EXPECT_EQ(back.hp.tau_max, 17);
  EXPECT_EQ(back.feature_scheme, "DL");
  EXPECT_THROW(weights_from_json(main_config(), weights_to_json(cfg, w)), std::invalid_argument);
}
