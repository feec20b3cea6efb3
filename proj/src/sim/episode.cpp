#include "locker/sim/episode.hpp"

#include <sstream>
#include <stdexcept>

#include "locker/allocation/solver.hpp"
#include "locker/sim/world.hpp"

namespace locker::sim {

std::uint64_t epoch_seed(const ScenarioStream& stream, int day, int slot) {
  return derive_seed(stream.master_seed(), {stream_key::kPolicy, stream.instance(), static_cast<std::uint64_t>(day),
                                            static_cast<std::uint64_t>(slot)});
}

namespace {

[[noreturn]] void fail(const World& w, const std::string& what) {
  std::ostringstream msg;
  msg << "episode invariant violated on day " << w.state().day << " slot " << w.state().slot << ": " << what
      << "\nstate " << describe(w.state().L, w.state().O) << "\nparcels";
  for (const auto& p : w.parcels())
    msg << " (d" << p.delta << " c" << p.c << " day" << p.alloc_day << " b" << p.b << " q" << p.q << ")";
  throw std::logic_error(msg.str());
}

void check_capacity(const ProblemConfig& cfg, const World& w) {
  for (int delta = 1; delta <= cfg.D; ++delta)
    if (w.physically_occupied(delta) > cfg.capacity(delta)) fail(w, "compartment size overfilled");
  try {
    w.check_consistency();
  } catch (const std::logic_error& e) {
    fail(w, e.what());
  }
}

}  // namespace

EpisodeResult run_episode(const ProblemConfig& cfg, const policies::PolicyPair& pair, const ScenarioStream& stream,
                          int days, int warmup) {
  EpisodeResult out;
  if (days <= 0) return out;
  if (stream.days() < days || stream.slots() != cfg.T) throw std::invalid_argument("stream too short for episode");
  World world(cfg, initial_state(cfg, stream.arrival(1, 1)));
  long tags = 0;
  for (int day = 1; day <= days; ++day) {
    const bool measured = day > warmup;
    int prev_occupied = -1;
    for (int t = 1; t <= cfg.T; ++t) {
      const PreDecisionState& s = world.state();
      check_capacity(cfg, world);
      const int occ = world.physically_occupied();
      if (prev_occupied >= 0 && occ > prev_occupied) fail(world, "occupancy rose between request slots");
      prev_occupied = occ;
      out.snapshots.push_back({day, t, occ, pending_total(s.O)});

      const int g = policies::decide(cfg, pair, s, epoch_seed(stream, day, t));
      if (!s.request.none()) {
        const bool ok = allocation::check_feasible(cfg, s.L, s.O, s.request);
        if (g && !ok) fail(world, "policy accepted an infeasible request");
        out.requests.push_back({day, t, s.request, ok, g == 1, measured});
        if (measured) {
          ++out.measured_requests;
          if (g) {
            ++out.accepted;
            out.weighted_reward += cfg.weight(s.request.c);
          }
        }
      }
      out.log.push_back({day, t, EpochKind::kDemandControl, g, {}});
      world.decide(g, g ? stream.tag(tags++) : PickupTag{});
      world.advance(t < cfg.T ? stream.arrival(day, t + 1) : kNoArrival);
    }
    const PreDecisionState& s = world.state();
    check_capacity(cfg, world);
    AllocationMatrix a = policies::allocate(cfg, pair, s);
    world.allocate(a);
    if (world.physically_occupied() < prev_occupied) fail(world, "allocation freed compartments");
    out.snapshots.push_back({day, cfg.T + 1, world.physically_occupied(), pending_total(world.post_state().O)});
    out.log.push_back({day, cfg.T + 1, EpochKind::kAllocation, 0, std::move(a)});
    for (int delta = 1; delta <= cfg.D; ++delta)
      if (world.physically_occupied(delta) > cfg.capacity(delta)) fail(world, "allocation overfilled a size");
    if (day < days) world.advance(stream.arrival(day + 1, 1));
  }
  return out;
}

}  // namespace locker::sim
