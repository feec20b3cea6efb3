#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "locker/stochastic.hpp"

using namespace locker;

TEST(Residual, ClosedForms) {
  ProblemConfig cfg = main_config("1id");
  cfg.T = 20;
  auto p = residual_pickup_distribution(cfg, 1, 1, cfg.T);
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
  EXPECT_NEAR(p[2], 0.5, 1e-15);

  p = residual_pickup_distribution(cfg, 1, 1, 10);
  EXPECT_NEAR(p[0], 0.3 / 0.7, 1e-15);
  EXPECT_NEAR(p[1], 0.2 / 0.7, 1e-15);
  EXPECT_NEAR(p[2], 0.2 / 0.7, 1e-15);

  // past the last request slot nothing can happen later today
  p = residual_pickup_distribution(cfg, 2, 2, cfg.T + 1);
  EXPECT_DOUBLE_EQ(p[2], 1.0);
}

TEST(Residual, OnlyMassLeft) {
  ProblemConfig cfg = main_config("1id");
  cfg.pickup[0] = {0.0, 0.0, 1.0};
  for (int t = 1; t <= cfg.T + 1; ++t) EXPECT_DOUBLE_EQ(residual_pickup_distribution(cfg, 1, 2, t)[2], 1.0);
}

TEST(Residual, DegenerateSurvivalThrows) {
  ProblemConfig cfg = main_config("1id");
  cfg.pickup[0] = {0.0, 1.0, 0.0};
  EXPECT_THROW(residual_pickup_distribution(cfg, 1, 2, cfg.T + 1), std::domain_error);
  EXPECT_THROW(residual_pickup_distribution(cfg, 1, 3, 1), std::invalid_argument);
}

// Draw (b, q) unconditionally, keep survivors of (h, t), compare the law of b.
TEST(Residual, MatchesRejectionSampling) {
  std::mt19937_64 rng(2024);
  for (const auto& setting : {"1id", "2pf", "3pu"}) {
    const ProblemConfig cfg = main_config(setting);
    for (int c = 1; c <= cfg.C; ++c)
      for (int h = 1; h <= cfg.B - 1; ++h)
        for (int t : {1, 7, cfg.T, cfg.T + 1}) {
          const auto exact = residual_pickup_distribution(cfg, c, h, t);
          std::vector<long> hits(cfg.B, 0);
          long kept = 0;
          while (kept < 100000) {
            const PickupTime pt = realize_pickup(cfg, c, {uniform(rng), uniform(rng)});
            if (pt.b < h || (pt.b == h && pt.q <= t)) continue;
            ++hits[pt.b - 1];
            ++kept;
          }
          for (int b = 1; b <= cfg.B; ++b) {
            const double p = exact[b - 1];
            const double sd = std::sqrt(p * (1 - p) / kept);
            EXPECT_NEAR(static_cast<double>(hits[b - 1]) / kept, p, 3 * sd + 1e-12)
                << setting << " c=" << c << " h=" << h << " t=" << t << " b=" << b;
          }
        }
  }
}

TEST(Arrivals, PaperMarginals) {
  const ProblemConfig cfg = main_config("1id");
  const auto types = request_types(cfg);
  const auto probs = request_type_probs(cfg);
  double sum = 0.0;
  for (double p : probs) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(probs.back(), 0.1, 1e-12);

  std::map<int, double> by_c, by_d;
  for (size_t i = 0; i + 1 < types.size(); ++i) {
    by_c[types[i].c] += probs[i];
    by_d[types[i].d] += probs[i] / 0.9;
  }
  EXPECT_NEAR(by_c[1], 0.3, 1e-12);
  EXPECT_NEAR(by_c[2], 0.6, 1e-12);
  EXPECT_NEAR(by_d[1], 1.0 / 2, 1e-12);
  EXPECT_NEAR(by_d[2], 1.0 / 3, 1e-12);
  EXPECT_NEAR(by_d[3], 1.0 / 6, 1e-12);
}

TEST(Arrivals, MonteCarloFrequencies) {
  const ProblemConfig cfg = main_config("2pu");
  const auto types = request_types(cfg);
  const auto probs = request_type_probs(cfg);
  std::mt19937_64 rng(99);
  std::vector<long> hits(types.size(), 0);
  const long n = 1000000;
  for (long i = 0; i < n; ++i) {
    const Request r = sample_arrival(cfg, uniform(rng));
    const auto it = std::find(types.begin(), types.end(), r);
    ++hits[it - types.begin()];
  }
  for (size_t i = 0; i < types.size(); ++i) {
    const double p = probs[i];
    EXPECT_NEAR(static_cast<double>(hits[i]) / n, p, 4 * std::sqrt(p * (1 - p) / n) + 1e-12) << i;
  }
}

TEST(Sampling, SkipsZeroCells) {
  EXPECT_EQ(sample_index({0.0, 1.0, 0.0}, 0.0), 1);
  EXPECT_EQ(sample_index({0.5, 0.0, 0.5}, 0.5), 2);
  EXPECT_EQ(sample_index({0.5, 0.5, 0.0}, 0.9999999999), 1);
  EXPECT_THROW(sample_index({0.0, 0.0}, 0.3), std::domain_error);
}

TEST(Pickups, SlotIsUniform) {
  const ProblemConfig cfg = main_config("1id");
  std::vector<long> slots(cfg.T + 1, 0);
  std::mt19937_64 rng(3);
  const long n = 200000;
  for (long i = 0; i < n; ++i) {
    const PickupTime pt = realize_pickup(cfg, 2, {uniform(rng), uniform(rng)});
    ASSERT_GE(pt.q, 1);
    ASSERT_LE(pt.q, cfg.T);
    ++slots[pt.q];
  }
  const double p = 1.0 / cfg.T;
  for (int q = 1; q <= cfg.T; ++q)
    EXPECT_NEAR(static_cast<double>(slots[q]) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Streams, CommonArrivalsAcrossSettings) {
  const auto base = build_scenario_stream(main_config("1id"), 42, 3, 40);
  for (const auto& s : paper_settings()) {
    const auto other = build_scenario_stream(main_config(s), 42, 3, 40);
    for (int day = 1; day <= 40; ++day)
      for (int t = 1; t <= base.slots(); ++t) ASSERT_EQ(other.arrival(day, t), base.arrival(day, t)) << s;
  }
  const auto next = build_scenario_stream(main_config("1id"), 42, 4, 40);
  int differ = 0;
  for (int day = 1; day <= 40; ++day)
    for (int t = 1; t <= base.slots(); ++t) differ += !(next.arrival(day, t) == base.arrival(day, t));
  EXPECT_GT(differ, 0);
}

TEST(Streams, TagsDependOnlyOnCounter) {
  const auto a = build_scenario_stream(main_config("1id"), 42, 3, 5);
  const auto b = build_scenario_stream(main_config("3pu"), 42, 3, 5);
  std::set<double> seen;
  for (long k : {0L, 1L, 17L, 1000L}) {
    EXPECT_EQ(a.tag(k).u_day, b.tag(k).u_day);
    EXPECT_EQ(a.tag(k).u_slot, b.tag(k).u_slot);
    seen.insert(a.tag(k).u_day);
  }
  EXPECT_EQ(seen.size(), 4u);
  // reading tags out of order changes nothing
  EXPECT_EQ(a.tag(17).u_day, build_scenario_stream(main_config("1id"), 42, 3, 5).tag(17).u_day);
}

TEST(Streams, DumpLoadRoundTrip) {
  const auto s = build_scenario_stream(desk_config(), 7, 2, 6);
  std::stringstream buf;
  s.dump(buf);
  const std::string text = buf.str();
  const auto back = ScenarioStream::load(buf);
  EXPECT_EQ(back, s);
  std::stringstream again;
  back.dump(again);
  EXPECT_EQ(again.str(), text);
}

TEST(Streams, LoadRejectsTamperedTags) {
  const auto s = build_scenario_stream(desk_config(), 7, 2, 1);
  std::stringstream buf;
  s.dump(buf);
  std::string text = buf.str();
  text.replace(text.find("\nP 0 ") + 5, 1, "0x1.8p-1 ");
  std::stringstream bad(text);
  EXPECT_THROW(ScenarioStream::load(bad), std::runtime_error);
}

TEST(Seeds, DerivationIsStable) {
  EXPECT_EQ(derive_seed({1, 2, 3}), derive_seed({1, 2, 3}));
  EXPECT_NE(derive_seed({1, 2, 3}), derive_seed({1, 3, 2}));
  EXPECT_NE(derive_seed(5, {1}), derive_seed(6, {1}));
  const double u = hashed_uniform(9, {1, 2});
  EXPECT_GE(u, 0.0);
  EXPECT_LT(u, 1.0);
}
