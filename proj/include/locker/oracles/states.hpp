#pragma once
// Random reachable states: a trajectory that accepts feasible requests with
// a fixed probability and allocates with the given scheme.

#include <algorithm>
#include <random>
#include <vector>

#include "locker/allocation/solver.hpp"
#include "locker/sim/world.hpp"

namespace locker::oracle {

inline std::vector<PreDecisionState> random_trajectory(const ProblemConfig& cfg, std::uint64_t seed, int days,
                                                       double accept_prob,
                                                       allocation::Scheme scheme = allocation::Scheme::kDL) {
  std::mt19937_64 rng(seed);
  auto draw = [&] { return sample_arrival(cfg, uniform(rng)); };
  sim::World world(cfg, initial_state(cfg, draw()));
  std::vector<PreDecisionState> out;
  for (int day = 1; day <= days; ++day)
    for (int t = 1; t <= cfg.T + 1; ++t) {
      const PreDecisionState& s = world.state();
      out.push_back(s);
      if (world.at_allocation()) {
        world.allocate(allocation::decide_allocation(cfg, s.L, s.O, scheme));
      } else {
        int g = 0;
        if (!s.request.none() && allocation::check_feasible(cfg, s.L, s.O, s.request))
          g = uniform(rng) < accept_prob ? 1 : 0;
        world.decide(g, {uniform(rng), uniform(rng)});
      }
      world.advance(draw());
      world.check_consistency();
    }
  return out;
}

// `count` states sampled from independent trajectories with varied
// acceptance propensity; `allocation_only` keeps only end-of-day states.
inline std::vector<PreDecisionState> random_reachable_states(const ProblemConfig& cfg, std::uint64_t seed,
                                                             int count, bool allocation_only = false,
                                                             int days = 8) {
  std::mt19937_64 rng(seed);
  std::vector<PreDecisionState> pool;
  std::vector<PreDecisionState> out;
  while (static_cast<int>(out.size()) < count) {
    const double p = 0.5 + 0.5 * uniform(rng);
    pool = random_trajectory(cfg, rng(), days, p);
    std::vector<PreDecisionState> pick;
    for (auto& s : pool)
      if (s.day > 1 && (!allocation_only || s.slot == cfg.T + 1)) pick.push_back(std::move(s));
    std::shuffle(pick.begin(), pick.end(), rng);
    const int take = std::min<int>(static_cast<int>(pick.size()), allocation_only ? 4 : 12);
    for (int i = 0; i < take && static_cast<int>(out.size()) < count; ++i) out.push_back(std::move(pick[i]));
  }
  return out;
}

}  // namespace locker::oracle
