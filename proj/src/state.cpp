#include "locker/state.hpp"

#include <sstream>
#include <stdexcept>

namespace locker {

Occupancy empty_occupancy(const ProblemConfig& cfg) {
  return Occupancy(cfg.D, cfg.C, cfg.B - 1, 0);
}

Orders empty_orders(const ProblemConfig& cfg) { return Orders(cfg.D, cfg.C, cfg.F, 0); }

AllocationMatrix empty_allocation(const ProblemConfig& cfg) {
  return AllocationMatrix(cfg.D, cfg.D, cfg.C, 0);
}

int occupied(const Occupancy& L, int delta) {
  int n = 0;
  for (int c = 0; c < L.dim1(); ++c)
    for (int h = 0; h < L.dim2(); ++h) n += L(delta - 1, c, h);
  return n;
}

int occupied_total(const Occupancy& L) { return L.sum(); }
int pending_total(const Orders& O) { return O.sum(); }

PreDecisionState initial_state(const ProblemConfig& cfg, Request first) {
  return {1, 1, empty_occupancy(cfg), empty_orders(cfg), first};
}

EpochKind classify_epoch(const ProblemConfig& cfg, int t) {
  if (t < 1 || t > cfg.T + 1) throw std::out_of_range("slot " + std::to_string(t) + " out of range");
  return t == cfg.T + 1 ? EpochKind::kAllocation : EpochKind::kDemandControl;
}

PostDecisionState as_post_decision(const PreDecisionState& s) { return {s.day, s.slot, s.L, s.O}; }

PostDecisionState apply_demand_control(const ProblemConfig& cfg, const PreDecisionState& s, int g) {
  if (classify_epoch(cfg, s.slot) != EpochKind::kDemandControl)
    throw std::invalid_argument("demand control outside a request slot");
  if (g != 0 && g != 1) throw std::invalid_argument("g must be 0 or 1");
  PostDecisionState sx = as_post_decision(s);
  if (g == 1) {
    if (s.request.none()) throw std::invalid_argument("cannot accept a NoArrival epoch");
    sx.O.at(s.request.d - 1, s.request.c - 1, s.request.e - 1) += 1;
  }
  return sx;
}

PostDecisionState apply_allocation(const ProblemConfig& cfg, const PreDecisionState& s,
                                   const AllocationMatrix& a) {
  if (classify_epoch(cfg, s.slot) != EpochKind::kAllocation)
    throw std::invalid_argument("allocation outside the end-of-day epoch");
  if (a.dim0() != cfg.D || a.dim1() != cfg.D || a.dim2() != cfg.C)
    throw std::invalid_argument("allocation has wrong shape");
  for (int d = 0; d < cfg.D; ++d)
    for (int c = 0; c < cfg.C; ++c) {
      int placed = 0;
      for (int delta = 0; delta < cfg.D; ++delta) {
        const int v = a(d, delta, c);
        if (v < 0) throw std::invalid_argument("negative allocation");
        if (v > 0 && delta < d) throw std::invalid_argument("parcel allocated to a smaller compartment");
        placed += v;
      }
      if (placed != s.O(d, c, 0))
        throw std::invalid_argument("allocation does not deliver every due order");
    }

  PostDecisionState sx{s.day, s.slot, empty_occupancy(cfg), empty_orders(cfg)};
  for (int delta = 0; delta < cfg.D; ++delta) {
    int tonight = occupied(s.L, delta + 1);
    for (int c = 0; c < cfg.C; ++c) {
      // Dwell B-1 parcels leave tracking: by tomorrow night they are gone.
      for (int h = 1; h < cfg.B - 1; ++h) sx.L(delta, c, h) = s.L(delta, c, h - 1);
      int fresh = 0;
      for (int d = 0; d <= delta; ++d) fresh += a(d, delta, c);
      if (cfg.B > 1) sx.L(delta, c, 0) = fresh;
      tonight += fresh;
    }
    if (tonight > cfg.Q[delta]) throw std::invalid_argument("allocation overfills size " + std::to_string(delta + 1));
  }
  for (int d = 0; d < cfg.D; ++d)
    for (int c = 0; c < cfg.C; ++c)
      for (int f = 0; f + 1 < cfg.F; ++f) sx.O(d, c, f) = s.O(d, c, f + 1);
  return sx;
}

PreDecisionState apply_exogenous(const ProblemConfig& cfg, const PostDecisionState& sx,
                                 const ExogenousInfo& w) {
  const bool wraps = sx.slot == cfg.T + 1;
  const int want_day = wraps ? sx.day + 1 : sx.day;
  const int want_slot = wraps ? 1 : sx.slot + 1;
  if (w.day != want_day || w.slot != want_slot)
    throw std::invalid_argument("exogenous information for the wrong epoch");
  if (!(w.pickups.dim0() == sx.L.dim0() && w.pickups.dim1() == sx.L.dim1() &&
        w.pickups.dim2() == sx.L.dim2()))
    throw std::invalid_argument("pickup tensor has wrong shape");
  if (classify_epoch(cfg, w.slot) == EpochKind::kAllocation && !w.request.none())
    throw std::invalid_argument("requests cannot arrive at the allocation epoch");
  PreDecisionState s{w.day, w.slot, sx.L, sx.O, w.request};
  for (size_t i = 0; i < s.L.data().size(); ++i) {
    const int p = w.pickups.data()[i];
    if (p < 0 || p > s.L.data()[i]) throw std::invalid_argument("pickups exceed occupancy");
    s.L.data()[i] -= p;
  }
  return s;
}

double reward(const ProblemConfig& cfg, const PreDecisionState& s, const Decision& x) {
  if (x.kind == EpochKind::kAllocation) return 0.0;
  if (x.accept == 0) return 0.0;
  if (s.request.none()) throw std::invalid_argument("cannot accept a NoArrival epoch");
  return cfg.weight(s.request.c);
}

std::string describe(const Occupancy& L, const Orders& O) {
  std::ostringstream out;
  out << "L:";
  for (int d = 0; d < L.dim0(); ++d)
    for (int c = 0; c < L.dim1(); ++c)
      for (int h = 0; h < L.dim2(); ++h)
        if (L(d, c, h)) out << " l[" << d + 1 << "][" << c + 1 << "][" << h + 1 << "]=" << L(d, c, h);
  out << " O:";
  for (int d = 0; d < O.dim0(); ++d)
    for (int c = 0; c < O.dim1(); ++c)
      for (int f = 0; f < O.dim2(); ++f)
        if (O(d, c, f)) out << " o[" << d + 1 << "][" << c + 1 << "][" << f + 1 << "]=" << O(d, c, f);
  return out.str();
}

}  // namespace locker
