#include <gtest/gtest.h>

#include <random>

#include "locker/oracles/states.hpp"
#include "locker/state.hpp"

using namespace locker;

namespace {

// The two-size example day: three small, two large compartments.
struct Example {
  ProblemConfig cfg = toy_config();

  Occupancy L(std::initializer_list<std::initializer_list<int>> rows) const {
    Occupancy out = empty_occupancy(cfg);
    int d = 0;
    for (auto row : rows) {
      int h = 0;
      for (int v : row) out(d, 0, h++) = v;
      ++d;
    }
    return out;
  }

  PreDecisionState s_k() const {
    PreDecisionState s{1, 7, L({{2, 1}, {1, 0}}), empty_orders(cfg), Request{1, 1, 1}};
    s.O(1, 0, 3) = 1;  // large parcel due in four days
    return s;
  }
};

}  // namespace

TEST(Epochs, Classification) {
  const ProblemConfig cfg = main_config();
  EXPECT_EQ(classify_epoch(cfg, 1), EpochKind::kDemandControl);
  EXPECT_EQ(classify_epoch(cfg, cfg.T), EpochKind::kDemandControl);
  EXPECT_EQ(classify_epoch(cfg, cfg.T + 1), EpochKind::kAllocation);
  EXPECT_THROW(classify_epoch(cfg, 0), std::out_of_range);
  EXPECT_THROW(classify_epoch(cfg, cfg.T + 2), std::out_of_range);
}

TEST(Config, PresetsValidate) {
  for (const auto& s : paper_settings()) EXPECT_NO_THROW(main_config(s).validate()) << s;
  EXPECT_NO_THROW(desk_config().validate());
  EXPECT_NO_THROW(toy_config().validate());
  EXPECT_NO_THROW(tiny_config().validate());
  EXPECT_EQ(main_config().feature_length(), 22);
}

TEST(Config, RejectsBrokenTables) {
  ProblemConfig cfg = main_config();
  cfg.pickup[0] = {0.5, 0.2, 0.2};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = main_config();
  cfg.F = 4;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = main_config();
  cfg.customer_prob = {0.6, 0.6};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = main_config();
  cfg.Q[1] = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Config, SettingsKeepPopulationLaw) {
  for (const auto& s : paper_settings()) {
    const ProblemConfig cfg = main_config(s);
    for (int b = 1; b <= 3; ++b) {
      double agg = 0.0;
      for (int c = 1; c <= 2; ++c) agg += cfg.customer_prob[c - 1] * cfg.pickup_prob(c, b);
      agg /= cfg.customer_prob[0] + cfg.customer_prob[1];
      EXPECT_NEAR(agg, b == 1 ? 0.6 : 0.2, 1e-9) << s;
    }
  }
  EXPECT_DOUBLE_EQ(main_config("3pu").weight(1), 3.0);
  EXPECT_DOUBLE_EQ(main_config("3pu").pickup_prob(1, 1), 0.94);
  EXPECT_THROW(main_config("3xx"), std::invalid_argument);
}

TEST(Config, JsonRoundTripAndHash) {
  const ProblemConfig cfg = main_config("2pf");
  const nlohmann::json j = cfg;
  const ProblemConfig back = j.get<ProblemConfig>();
  EXPECT_EQ(back.hash(), cfg.hash());
  EXPECT_NE(main_config("2pu").hash(), cfg.hash());
  EXPECT_EQ(cfg.hash_hex().size(), 16u);
}

TEST(Transitions, WorkedExampleDay) {
  Example ex;
  const ProblemConfig& cfg = ex.cfg;
  const PreDecisionState sk = ex.s_k();

  const PostDecisionState skx = apply_demand_control(cfg, sk, 1);
  EXPECT_EQ(skx.L, sk.L);
  EXPECT_EQ(skx.O(0, 0, 0), 1);
  EXPECT_EQ(skx.O(1, 0, 3), 1);
  EXPECT_EQ(skx.O.sum(), 2);
  EXPECT_EQ(skx.slot, 7);

  // Slots 8 and 9: one small (h=2) and one large (h=1) pickup, then i=7.
  ExogenousInfo w{1, 8, kNoArrival, empty_occupancy(cfg)};
  w.pickups(0, 0, 1) = 1;
  w.pickups(1, 0, 0) = 1;
  PreDecisionState s8 = apply_exogenous(cfg, skx, w);
  EXPECT_EQ(s8.L, ex.L({{2, 0}, {0, 0}}));
  const PreDecisionState sk1 =
      apply_exogenous(cfg, apply_demand_control(cfg, s8, 0), {1, 9, Request{1, 1, 3}, empty_occupancy(cfg)});
  const PostDecisionState sk1x = apply_demand_control(cfg, sk1, 1);
  EXPECT_EQ(sk1x.O(0, 0, 2), 1);

  // i=4 leaves before the allocation epoch.
  ExogenousInfo w10{1, 10, kNoArrival, empty_occupancy(cfg)};
  w10.pickups(0, 0, 0) = 1;
  const PreDecisionState sk2 = apply_exogenous(cfg, sk1x, w10);
  EXPECT_EQ(sk2.L, ex.L({{1, 0}, {0, 0}}));

  AllocationMatrix a = empty_allocation(cfg);
  a(0, 1, 0) = 1;  // small parcel, large compartment
  const PostDecisionState sk2x = apply_allocation(cfg, sk2, a);
  EXPECT_EQ(sk2x.day, 1);
  EXPECT_EQ(sk2x.slot, 10);
  EXPECT_EQ(sk2x.L, ex.L({{0, 1}, {1, 0}}));
  Orders expect = empty_orders(cfg);
  expect(0, 0, 1) = 1;
  expect(1, 0, 2) = 1;
  EXPECT_EQ(sk2x.O, expect);
}

TEST(Transitions, RejectionIsIdentity) {
  Example ex;
  const PreDecisionState s = ex.s_k();
  const PostDecisionState sx = apply_demand_control(ex.cfg, s, 0);
  EXPECT_EQ(sx.L, s.L);
  EXPECT_EQ(sx.O, s.O);
  // and a pickup-free transition to the same request round-trips
  const PreDecisionState back = apply_exogenous(ex.cfg, sx, {1, 8, s.request, empty_occupancy(ex.cfg)});
  EXPECT_EQ(back.L, s.L);
  EXPECT_EQ(back.O, s.O);
}

TEST(Transitions, InputErrors) {
  Example ex;
  PreDecisionState s = ex.s_k();
  EXPECT_THROW(apply_demand_control(ex.cfg, s, 2), std::invalid_argument);
  s.request = kNoArrival;
  EXPECT_THROW(apply_demand_control(ex.cfg, s, 1), std::invalid_argument);
  EXPECT_THROW(apply_allocation(ex.cfg, s, empty_allocation(ex.cfg)), std::invalid_argument);

  PostDecisionState sx = apply_demand_control(ex.cfg, s, 0);
  ExogenousInfo w{1, 8, kNoArrival, empty_occupancy(ex.cfg)};
  w.pickups(1, 0, 1) = 1;  // no large parcel with h=2
  EXPECT_THROW(apply_exogenous(ex.cfg, sx, w), std::invalid_argument);
  w.pickups = empty_occupancy(ex.cfg);
  w.slot = 9;
  EXPECT_THROW(apply_exogenous(ex.cfg, sx, w), std::invalid_argument);

  PreDecisionState end{1, 10, ex.L({{1, 0}, {0, 0}}), empty_orders(ex.cfg), kNoArrival};
  end.O(0, 0, 0) = 1;
  AllocationMatrix a = empty_allocation(ex.cfg);
  EXPECT_THROW(apply_allocation(ex.cfg, end, a), std::invalid_argument);  // undelivered
  end.O(0, 0, 0) = 0;
  end.O(1, 0, 0) = 1;
  a(1, 0, 0) = 1;
  EXPECT_THROW(apply_allocation(ex.cfg, end, a), std::invalid_argument);  // downgrade
}

TEST(Transitions, EmptyAllocationOfEmptySystem) {
  const ProblemConfig cfg = main_config();
  PreDecisionState s = initial_state(cfg);
  s.slot = cfg.T + 1;
  const PostDecisionState sx = apply_allocation(cfg, s, empty_allocation(cfg));
  EXPECT_EQ(sx.L.sum(), 0);
  EXPECT_EQ(sx.O.sum(), 0);
}

TEST(Rewards, WeightOnAcceptOnly) {
  const ProblemConfig cfg = main_config("3id");
  PreDecisionState s = initial_state(cfg, Request{1, 2, 1});
  EXPECT_DOUBLE_EQ(reward(cfg, s, Decision::demand_control(1)), 3.0);
  EXPECT_DOUBLE_EQ(reward(cfg, s, Decision::demand_control(0)), 0.0);
  s.request = Request{2, 2, 1};
  EXPECT_DOUBLE_EQ(reward(cfg, s, Decision::demand_control(1)), 1.0);
  s.slot = cfg.T + 1;
  s.request = kNoArrival;
  EXPECT_DOUBLE_EQ(reward(cfg, s, Decision::allocate(empty_allocation(cfg))), 0.0);
}

TEST(Transitions, RandomFieldwiseDiffs) {
  const ProblemConfig cfg = main_config("2pf");
  std::mt19937_64 rng(7);
  const auto states = oracle::random_reachable_states(cfg, 11, 200);
  for (const auto& s : states) {
    if (s.slot == cfg.T + 1) {
      const AllocationMatrix a = allocation::decide_allocation(cfg, s.L, s.O, allocation::Scheme::kDL);
      const PostDecisionState sx = apply_allocation(cfg, s, a);
      int due = 0;
      for (int d = 0; d < cfg.D; ++d)
        for (int c = 0; c < cfg.C; ++c) due += s.O(d, c, 0);
      int fresh = 0;
      for (int d = 0; d < cfg.D; ++d)
        for (int c = 0; c < cfg.C; ++c) fresh += sx.L(d, c, 0);
      EXPECT_EQ(fresh, due);
      EXPECT_EQ(sx.O.sum(), s.O.sum() - due);
      for (int d = 0; d < cfg.D; ++d)
        for (int c = 0; c < cfg.C; ++c) EXPECT_EQ(sx.O(d, c, cfg.F - 1), 0);
      continue;
    }
    if (!s.request.none()) {
      const PostDecisionState sx = apply_demand_control(cfg, s, 1);
      Orders diff = sx.O;
      for (size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= s.O.data()[i];
      EXPECT_EQ(diff.sum(), 1);
      EXPECT_EQ(diff(s.request.d - 1, s.request.c - 1, s.request.e - 1), 1);
      EXPECT_EQ(sx.L, s.L);
    }
    // random pickups P <= L subtract entry-wise
    const PostDecisionState sx = apply_demand_control(cfg, s, 0);
    ExogenousInfo w{s.day, s.slot + 1, kNoArrival, empty_occupancy(cfg)};
    for (size_t i = 0; i < w.pickups.data().size(); ++i)
      w.pickups.data()[i] = std::uniform_int_distribution<int>(0, s.L.data()[i])(rng);
    const PreDecisionState next = apply_exogenous(cfg, sx, w);
    for (size_t i = 0; i < next.L.data().size(); ++i)
      EXPECT_EQ(next.L.data()[i], s.L.data()[i] - w.pickups.data()[i]);
    EXPECT_EQ(next.O, s.O);
  }
}

TEST(Transitions, ReachableStatesRespectCapacity) {
  for (const auto& cfg : {main_config("3pu"), toy_config(), tiny_config()}) {
    for (const auto& s : oracle::random_trajectory(cfg, 5, 12, 1.0))
      for (int delta = 1; delta <= cfg.D; ++delta) EXPECT_LE(occupied(s.L, delta), cfg.capacity(delta));
  }
}

TEST(Transitions, AcceptedOrderReachesLockerAfterLeadTime) {
  const ProblemConfig cfg = toy_config();
  sim::World w(cfg, initial_state(cfg, Request{1, 1, 3}));
  w.decide(1, {0.99, 0.99});  // picked up as late as possible
  for (int day = 1; day <= 3; ++day) {
    while (!w.at_allocation()) {
      if (w.state().slot > 1 || day > 1) w.decide(0);
      w.advance(kNoArrival);
    }
    EXPECT_EQ(w.state().L.sum(), 0);
    w.allocate(allocation::decide_allocation(cfg, w.state().L, w.state().O, allocation::Scheme::kDL));
    EXPECT_EQ(w.post_state().L.sum(), day == 3 ? 1 : 0);
    EXPECT_EQ(w.post_state().O.sum(), day == 3 ? 0 : 1);
    w.advance(kNoArrival);
  }
  EXPECT_EQ(w.physically_occupied(), 1);
}
