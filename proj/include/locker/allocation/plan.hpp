#pragma once

#include <string>
#include <vector>

#include "locker/allocation/cfa.hpp"

namespace locker::allocation {

// Orders that are allocated at `epoch` and then hold their compartment for
// `duration` epochs (clipped at the horizon). Customer types are pooled:
// with nested upgrade compatibility any pooled plan can be split back per
// type (Hall's condition reduces to the same suffix inequalities).
struct OrderGroup {
  int epoch = 1;
  int duration = 1;
  std::vector<int> by_size;  // [d-1]
};

// Tentative allocation plan over epochs 1..horizon with pooled customer types.
struct PlanProblem {
  int horizon = 0;
  std::vector<int> capacity;               // [δ-1]
  std::vector<std::vector<int>> fixed;     // [δ-1][f-1] occupancy by parcels in the locker
  std::vector<OrderGroup> groups;
  bool feasibility_only = true;
  SchemeObjective objective;

  // Canonical byte string; equal keys imply equal problems.
  std::string key() const;
};

struct PlanSolution {
  bool feasible = false;
  std::vector<std::vector<int>> placed;  // [group][δ-1]
  std::vector<std::vector<int>> free;    // [δ-1][f-1]
  double objective = 0.0;
  long nodes = 0;
};

// Exact solve. Window counts never appear as variables: for a free profile s
// the fewest covering windows number s_1 + Σ max(0, s_f - s_{f-1}), and that
// minimal cover always satisfies the window-end rule because capacity can
// only drop where new parcels arrive. Objectives reward fewer windows, so
// the optimum over (plan, windows) is the optimum over plans of the closed form.
PlanSolution solve_plan(const PlanProblem& p);

// Memoized solve_plan; one cache per thread, keyed by PlanProblem::key().
const PlanSolution& solve_plan_cached(const PlanProblem& p);

struct CacheStats {
  long hits = 0;
  long misses = 0;
};
CacheStats plan_cache_stats();
void clear_plan_cache();

}  // namespace locker::allocation
