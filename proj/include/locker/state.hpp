#pragma once

#include <string>

#include "locker/config.hpp"
#include "locker/grid.hpp"

namespace locker {

// l(δ-1, c-1, h-1) for dwell h = 1..B-1.
using Occupancy = Grid3<int>;
// o(d-1, c-1, f-1) for remaining fulfillment time f = 1..F.
using Orders = Grid3<int>;
// a(d-1, δ-1, c-1); only δ >= d may be nonzero.
using AllocationMatrix = Grid3<int>;
// Pickups released during one transition; same shape as Occupancy.
using Pickups = Grid3<int>;

Occupancy empty_occupancy(const ProblemConfig& cfg);
Orders empty_orders(const ProblemConfig& cfg);
AllocationMatrix empty_allocation(const ProblemConfig& cfg);

// Compartments of size delta (1-based) occupied by tracked parcels.
int occupied(const Occupancy& L, int delta);
int occupied_total(const Occupancy& L);
int pending_total(const Orders& O);

struct PostDecisionState {
  int day = 1;
  int slot = 1;
  Occupancy L;
  Orders O;

  friend bool operator==(const PostDecisionState&, const PostDecisionState&) = default;
};

struct PreDecisionState {
  int day = 1;
  int slot = 1;
  Occupancy L;
  Orders O;
  Request request;

  friend bool operator==(const PreDecisionState&, const PreDecisionState&) = default;
};

PreDecisionState initial_state(const ProblemConfig& cfg, Request first = kNoArrival);

enum class EpochKind { kDemandControl, kAllocation };

EpochKind classify_epoch(const ProblemConfig& cfg, int t);

struct Decision {
  EpochKind kind = EpochKind::kDemandControl;
  int accept = 0;
  AllocationMatrix allocation;

  static Decision demand_control(int g) { return {EpochKind::kDemandControl, g, {}}; }
  static Decision allocate(AllocationMatrix a) {
    return {EpochKind::kAllocation, 0, std::move(a)};
  }
};

struct ExogenousInfo {
  int day = 1;
  int slot = 1;
  Request request;
  Pickups pickups;
};

PostDecisionState apply_demand_control(const ProblemConfig& cfg, const PreDecisionState& s, int g);

// Delivers the f = 1 orders per `a` and shifts the day. Rejects allocations
// that leave orders undelivered, violate size compatibility or overfill a
// compartment size tonight; forward feasibility is the allocation module's job.
PostDecisionState apply_allocation(const ProblemConfig& cfg, const PreDecisionState& s,
                                   const AllocationMatrix& a);

PreDecisionState apply_exogenous(const ProblemConfig& cfg, const PostDecisionState& sx,
                                 const ExogenousInfo& w);

double reward(const ProblemConfig& cfg, const PreDecisionState& s, const Decision& x);

// The post-decision state reached by rejecting (identity on L, O).
PostDecisionState as_post_decision(const PreDecisionState& s);

std::string describe(const Occupancy& L, const Orders& O);

}  // namespace locker
