#pragma once
// Brute-force oracle suites shared by `selftest` and the acceptance binary.
// Each suite returns a verdict with a one-line detail instead of aborting.

#include <cstdint>
#include <string>
#include <vector>

#include "locker/allocation/cfa.hpp"

namespace locker::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Replays the two-size example day: states, feasibility of i=6, its large
// compartment option, the allocation post-decision state and window counts.
CheckResult worked_example();

// check_feasible against exhaustive row packings on the tiny config.
CheckResult feasibility_oracle(int states = 500, std::uint64_t seed = 1);

// Size monotonicity of feasibility on the main config.
CheckResult monotonicity(int states = 1000, std::uint64_t seed = 4);

// Weighted DL/LD allocation vs an explicit two-stage solve of the verbatim
// model. `mut` perturbs the weighted solve only.
CheckResult lexicographic(int states = 100, const allocation::Mutations& mut = {}, std::uint64_t seed = 8);

// Every split of a window of length 2..8 loses on Σ(2λ-1).
CheckResult window_dominance();

// LIFO covers vs explicit runs, the example counts in the verbatim CFA model
// and compact vs verbatim CFA optima. `mut` perturbs the verbatim model.
CheckResult windows(const allocation::Mutations& mut = {}, std::uint64_t seed = 6);

CheckResult ilp_oracle(int models = 1000, std::uint64_t seed = 77);
CheckResult lp_oracle(int models = 400, std::uint64_t seed = 20240517);
CheckResult qp_oracle(int problems = 4, long pg_steps = 1000000, std::uint64_t seed = 4);

// Residual pickup law and DLP tables against Monte Carlo at `samples` draws,
// one setting per pickup law.
CheckResult stochastic_laws(long samples = 100000, std::uint64_t seed = 2024);

// Cold-cache latency medians at the main config.
struct Latency {
  double feasibility_ms = 0.0;
  double allocation_ms = 0.0;
};
Latency measure_latency(int states = 200, std::uint64_t seed = 11);

struct SelftestOptions {
  allocation::Mutations mut;
  bool quick = false;  // smaller sample counts
};

// All oracle suites in a fixed order.
std::vector<CheckResult> selftest(const SelftestOptions& opt = {});

}  // namespace locker::checks
