#pragma once

#include <functional>
#include <vector>

#include "locker/state.hpp"
#include "locker/stochastic.hpp"

namespace locker::sim {

// Hidden per-parcel ledger behind the public state. Policies only ever see
// state(); pickups surface as aggregate counts through apply_exogenous.
struct Parcel {
  int delta = 1;
  int c = 1;
  int alloc_day = 0;
  int b = 1;  // picked up on day alloc_day + b ...
  int q = 1;  // ... at slot q
};

struct PendingOrder {
  int d = 1;
  int c = 1;
  int due_day = 1;  // allocated at the end of this day
  PickupTag tag;
};

class World {
 public:
  World(const ProblemConfig& cfg, PreDecisionState start, std::vector<Parcel> parcels = {},
        std::vector<PendingOrder> orders = {});

  // A world sitting right after a demand-control decision at sx.slot <= T.
  static World from_post_decision(const ProblemConfig& cfg, const PostDecisionState& sx,
                                  std::vector<Parcel> parcels, std::vector<PendingOrder> orders);

  const PreDecisionState& state() const { return state_; }
  const PostDecisionState& post_state() const { return post_; }
  bool at_allocation() const { return state_.slot == cfg_->T + 1; }

  // Demand control at a request slot. Accepted orders take `tag` as their
  // pickup randomness.
  void decide(int g, const PickupTag& tag = {});
  void allocate(const AllocationMatrix& a);
  // Moves to the next epoch; `next` is the arrival there (ignored at T+1).
  void advance(Request next);

  int physically_occupied() const { return static_cast<int>(parcels_.size()); }
  int physically_occupied(int delta) const;
  const std::vector<Parcel>& parcels() const { return parcels_; }
  const std::vector<PendingOrder>& orders() const { return orders_; }

  // Throws std::logic_error if the public L/O disagree with the ledger.
  void check_consistency() const;

 private:
  const ProblemConfig* cfg_;
  PreDecisionState state_;
  PostDecisionState post_;
  bool decided_ = false;
  std::vector<Parcel> parcels_;
  std::vector<PendingOrder> orders_;  // acceptance order
};

}  // namespace locker::sim
