#include "locker/sim/world.hpp"

#include <stdexcept>

namespace locker::sim {

World::World(const ProblemConfig& cfg, PreDecisionState start, std::vector<Parcel> parcels,
             std::vector<PendingOrder> orders)
    : cfg_(&cfg), state_(std::move(start)), parcels_(std::move(parcels)), orders_(std::move(orders)) {
  check_consistency();
}

World World::from_post_decision(const ProblemConfig& cfg, const PostDecisionState& sx,
                                std::vector<Parcel> parcels, std::vector<PendingOrder> orders) {
  if (sx.slot < 1 || sx.slot > cfg.T) throw std::invalid_argument("post-decision world needs a request slot");
  World w(cfg, PreDecisionState{sx.day, sx.slot, sx.L, sx.O, kNoArrival}, std::move(parcels), std::move(orders));
  w.post_ = sx;
  w.decided_ = true;
  return w;
}

int World::physically_occupied(int delta) const {
  int n = 0;
  for (const auto& p : parcels_) n += p.delta == delta;
  return n;
}

void World::decide(int g, const PickupTag& tag) {
  if (decided_) throw std::logic_error("epoch already decided");
  post_ = apply_demand_control(*cfg_, state_, g);
  if (g == 1) {
    const Request& r = state_.request;
    orders_.push_back({r.d, r.c, state_.day + r.e - 1, tag});
  }
  decided_ = true;
}

void World::allocate(const AllocationMatrix& a) {
  if (decided_) throw std::logic_error("epoch already decided");
  post_ = apply_allocation(*cfg_, state_, a);
  const int day = state_.day;
  AllocationMatrix left = a;
  std::vector<PendingOrder> keep;
  for (const auto& o : orders_) {
    if (o.due_day != day) {
      keep.push_back(o);
      continue;
    }
    int delta = o.d - 1;
    while (delta < cfg_->D && left(o.d - 1, delta, o.c - 1) == 0) ++delta;
    if (delta == cfg_->D) throw std::logic_error("allocation does not cover a due order");
    --left(o.d - 1, delta, o.c - 1);
    const PickupTime t = realize_pickup(*cfg_, o.c, o.tag);
    parcels_.push_back({delta + 1, o.c, day, t.b, t.q});
  }
  orders_ = std::move(keep);
  decided_ = true;
}

void World::advance(Request next) {
  if (!decided_) throw std::logic_error("advance before deciding");
  const bool wraps = post_.slot == cfg_->T + 1;
  ExogenousInfo w;
  w.day = wraps ? post_.day + 1 : post_.day;
  w.slot = wraps ? 1 : post_.slot + 1;
  w.request = w.slot == cfg_->T + 1 ? kNoArrival : next;
  w.pickups = empty_occupancy(*cfg_);
  std::vector<Parcel> stay;
  for (const auto& p : parcels_) {
    if (p.alloc_day + p.b == w.day && p.q == w.slot) {
      const int h = w.day - p.alloc_day;
      if (h <= cfg_->B - 1) ++w.pickups(p.delta - 1, p.c - 1, h - 1);
      continue;
    }
    stay.push_back(p);
  }
  parcels_ = std::move(stay);
  state_ = apply_exogenous(*cfg_, post_, w);
  decided_ = false;
}

void World::check_consistency() const {
  const PreDecisionState& s = state_;
  Occupancy L = empty_occupancy(*cfg_);
  for (const auto& p : parcels_) {
    // At the allocation epoch tonight's shift has not happened yet, so the
    // dwell is counted for the current day in both cases.
    const int h = s.day - p.alloc_day;
    if (h >= 1 && h <= cfg_->B - 1) ++L(p.delta - 1, p.c - 1, h - 1);
    if (h < 1 || h > cfg_->B) throw std::logic_error("parcel dwell out of range");
  }
  Orders O = empty_orders(*cfg_);
  for (const auto& o : orders_) {
    const int f = o.due_day - s.day + 1;
    if (f < 1 || f > cfg_->F) throw std::logic_error("pending order outside the horizon");
    ++O(o.d - 1, o.c - 1, f - 1);
  }
  if (!(L == s.L) || !(O == s.O))
    throw std::logic_error("ledger disagrees with state: ledger " + describe(L, O) + " | state " +
                           describe(s.L, s.O));
}

}  // namespace locker::sim
