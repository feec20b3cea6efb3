#pragma once

#include <vector>

#include "locker/allocation/cfa.hpp"
#include "locker/grid.hpp"
#include "locker/optim/ilp.hpp"
#include "locker/state.hpp"

// Constraint systems written out term by term, one row per constraint of the
// published model. The production path (plan.hpp) solves an equivalent compact
// form; these builders are the reference it is tested against.
namespace locker::allocation {

struct FeasibilityModel {
  optim::IntModel model;
  Grid3<int> y;  // (δ-1, c-1, f-1) -> variable
};

// Capacity (sliding B-epoch worst case), prefix compatibility and complete
// allocation of `orders` (already including a candidate request, if any).
FeasibilityModel feasibility_model(const ProblemConfig& cfg, const Occupancy& L, const Orders& orders);

enum class CfaObjective { kWeighted, kPrimary, kSecondary };

struct CfaModel {
  optim::IntModel model;
  Grid3<int> y;                        // (δ-1, c-1, f-1)
  Grid3<int> a;                        // (d-1, δ-1, c-1), -1 when δ < d
  std::vector<std::vector<int>> s;     // [δ-1][f-1]
  Grid3<int> wf;                       // (δ-1, λ-1, f-1), -1 past the horizon
  std::vector<std::vector<int>> w;     // [δ-1][λ-1]
  int primary_row = -1;                // index of an added primary floor, if any
};

CfaModel cfa_model(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Scheme scheme,
                   CfaObjective objective = CfaObjective::kWeighted, const Mutations& mut = {});

// Adds Σ primary-coefficients · w >= floor (two-stage lexicographic solve).
void add_primary_floor(CfaModel& m, const ProblemConfig& cfg, Scheme scheme, long floor);

// Worst-case occupancy of the tracked parcels at epochs 1..horizon:
// a dwell-h parcel is still there at epoch f when f <= B - h.
std::vector<std::vector<int>> worst_case_fixed(const ProblemConfig& cfg, const Occupancy& L, int horizon);

// Splits pooled placements of one epoch's orders back per customer type:
// compartments are filled from the largest size down with the largest
// compatible parcels, customer types in ascending order. Returns a(d,δ,c).
AllocationMatrix split_by_customer(const ProblemConfig& cfg, const Orders& O, int f,
                                   const std::vector<int>& placed_by_size);

// Full assignment of the verbatim CFA model reproducing a pooled plan and its
// minimal window cover; used to certify the compact solutions.
std::vector<int> cfa_assignment(const CfaModel& m, const ProblemConfig& cfg, const Orders& O,
                                const std::vector<std::vector<int>>& placed_by_epoch,
                                const std::vector<std::vector<int>>& free);

}  // namespace locker::allocation
