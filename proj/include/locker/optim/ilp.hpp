#pragma once

#include <string>
#include <vector>

#include "locker/optim/linear.hpp"

namespace locker::optim {

// Bounded-integer linear model, maximized. Every variable has finite integer
// bounds; coefficients may be fractional (the weighted window objectives are).
struct IntModel {
  std::vector<int> lower;
  std::vector<int> upper;
  std::vector<double> objective;
  std::vector<std::string> names;
  std::vector<LinearConstraint> constraints;
  double objective_offset = 0.0;
  bool feasibility_only = false;

  int add_variable(int lo, int hi, double obj = 0.0, std::string name = {});
  void add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                      std::string name = {});
  [[nodiscard]] int num_variables() const { return static_cast<int>(lower.size()); }
  [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints.size()); }

  [[nodiscard]] bool is_feasible(const std::vector<int>& x, double tol = 1e-9) const;
  [[nodiscard]] double evaluate(const std::vector<int>& x) const;
  // CPLEX-style LP text, for eyeballing a model in a debugger or a file.
  [[nodiscard]] std::string to_lp_format() const;
};

enum class IlpStatus { kOptimal, kInfeasible };

struct IlpResult {
  IlpStatus status = IlpStatus::kInfeasible;
  std::vector<int> values;
  double objective = 0.0;
  long nodes = 0;
};

struct IlpOptions {
  bool use_lp_bound = true;
  long node_limit = 0;  // 0 = unlimited; exceeding it throws NumericalError
};

IlpResult ilp_solve(const IntModel& model, const IlpOptions& options = {});

const char* to_string(IlpStatus status);

}  // namespace locker::optim
