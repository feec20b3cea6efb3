#include "locker/allocation/solver.hpp"

#include <stdexcept>

#include "locker/allocation/models.hpp"

namespace locker::allocation {

Orders with_request(const Orders& O, Request r) {
  Orders out = O;
  if (!r.none()) out.at(r.d - 1, r.c - 1, r.e - 1) += 1;
  return out;
}

PlanProblem worst_case_problem(const ProblemConfig& cfg, const Occupancy& L, const Orders& O) {
  PlanProblem p;
  p.horizon = cfg.F;
  p.capacity = cfg.Q;
  p.fixed = worst_case_fixed(cfg, L, cfg.F);
  for (int f = 1; f <= cfg.F; ++f) {
    OrderGroup g{f, cfg.B, std::vector<int>(cfg.D, 0)};
    for (int d = 0; d < cfg.D; ++d)
      for (int c = 0; c < cfg.C; ++c) g.by_size[d] += O(d, c, f - 1);
    p.groups.push_back(std::move(g));
  }
  return p;
}

bool check_feasible(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Request r) {
  PlanProblem p = worst_case_problem(cfg, L, with_request(O, r));
  p.feasibility_only = true;
  return solve_plan_cached(p).feasible;
}

bool check_feasible_reference(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Request r) {
  const FeasibilityModel fm = feasibility_model(cfg, L, with_request(O, r));
  return optim::ilp_solve(fm.model).status == optim::IlpStatus::kOptimal;
}

CfaSolution solve_cfa(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Scheme scheme,
                      const Mutations& mut) {
  PlanProblem p = worst_case_problem(cfg, L, O);
  p.feasibility_only = false;
  p.objective = scheme_objective(scheme, cfg, cfg.F, false, mut);
  const PlanSolution& sol = solve_plan_cached(p);
  if (!sol.feasible) throw std::runtime_error("pending orders cannot be allocated: " + describe(L, O));
  CfaSolution out;
  out.placed_by_epoch = sol.placed;
  out.free = sol.free;
  out.windows = count_windows(sol.free);
  out.objective = sol.objective;
  out.a = split_by_customer(cfg, O, 1, sol.placed[0]);
  return out;
}

AllocationMatrix decide_allocation(const ProblemConfig& cfg, const Occupancy& L, const Orders& O,
                                   Scheme scheme) {
  return solve_cfa(cfg, L, O, scheme).a;
}

}  // namespace locker::allocation
