#pragma once

#include <vector>

#include "locker/allocation/cfa.hpp"
#include "locker/allocation/plan.hpp"
#include "locker/allocation/windows.hpp"
#include "locker/state.hpp"

namespace locker::allocation {

// O with the candidate request added at (d, c, e); NoArrival leaves O as is.
Orders with_request(const Orders& O, Request r);

// Pooled worst-case plan over epochs 1..F: every order holds its compartment
// for B epochs after allocation.
PlanProblem worst_case_problem(const ProblemConfig& cfg, const Occupancy& L, const Orders& O);

// Is there a tentative plan that allocates every pending order (plus the
// request, if any) without exceeding capacity under maximum storage time?
bool check_feasible(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Request r = kNoArrival);

// Same question answered with the verbatim per-customer model; no caching.
bool check_feasible_reference(const ProblemConfig& cfg, const Occupancy& L, const Orders& O,
                              Request r = kNoArrival);

struct CfaSolution {
  AllocationMatrix a;                               // tonight's allocation
  std::vector<std::vector<int>> placed_by_epoch;    // [f-1][δ-1], pooled over customers
  std::vector<std::vector<int>> free;               // [δ-1][f-1]
  WindowCounts windows;                             // minimal cover of `free`
  double objective = 0.0;
};

// Solves the CFA for an allocation-epoch state. Throws std::runtime_error if
// the pending orders cannot be allocated (unreachable for valid trajectories).
CfaSolution solve_cfa(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Scheme scheme,
                      const Mutations& mut = {});

AllocationMatrix decide_allocation(const ProblemConfig& cfg, const Occupancy& L, const Orders& O,
                                   Scheme scheme);

}  // namespace locker::allocation
