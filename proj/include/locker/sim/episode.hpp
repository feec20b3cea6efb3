#pragma once

#include <cstdint>
#include <vector>

#include "locker/policies/policies.hpp"
#include "locker/stochastic.hpp"

namespace locker::sim {

struct EpochRecord {
  int day = 1;
  int slot = 1;
  EpochKind kind = EpochKind::kDemandControl;
  int accept = 0;             // demand control
  AllocationMatrix allocation;  // allocation epochs only
};

struct RequestRecord {
  int day = 1;
  int slot = 1;
  Request request;
  bool feasible = false;
  bool accepted = false;
  bool measured = false;  // after warm-up
};

// Compartments physically holding a parcel and orders waiting, seen at
// every request slot (before the decision) and right after the allocation.
struct Snapshot {
  int day = 1;
  int slot = 1;
  int occupied = 0;
  int pending = 0;
};

struct EpisodeResult {
  std::vector<EpochRecord> log;
  std::vector<RequestRecord> requests;
  std::vector<Snapshot> snapshots;
  double weighted_reward = 0.0;  // measured days only
  long accepted = 0;
  long measured_requests = 0;
};

// Simulates `days` days from an empty locker. Days 1..warmup shape the
// dynamics but not the metrics. Throws std::logic_error with a state dump
// on any invariant violation.
EpisodeResult run_episode(const ProblemConfig& cfg, const policies::PolicyPair& pair, const ScenarioStream& stream,
                          int days, int warmup);

// Seed that keys every sampled quantity of one decision epoch; independent
// of the policy so that policies share it.
std::uint64_t epoch_seed(const ScenarioStream& stream, int day, int slot);

}  // namespace locker::sim
