#pragma once

#include <string>
#include <vector>

#include "locker/optim/linear.hpp"

namespace locker::optim {

/// Continuous linear program, always maximized. Variables carry a finite lower
/// bound (default 0) and an optional upper bound.
struct LpModel {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> objective;
  std::vector<std::string> names;
  std::vector<LinearConstraint> constraints;
  double objective_offset = 0.0;

  int add_variable(double lo = 0.0, double hi = kInfinity, double obj = 0.0,
                   std::string name = {});
  void add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                      std::string name = {});
  [[nodiscard]] int num_variables() const { return static_cast<int>(lower.size()); }
  [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  int iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 30;
  int max_iterations = 0;  // 0 = derived from model size
};

LpResult lp_solve(const LpModel& model, const LpOptions& options = {});

const char* to_string(LpStatus status);

}  // namespace locker::optim
