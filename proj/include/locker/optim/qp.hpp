#pragma once

#include <Eigen/Dense>
#include <vector>

namespace locker::optim {

// min ||y - X theta||^2 + gamma * sum_{j penalized} theta_j^2  s.t.  G theta >= h.
// The zero vector must satisfy the constraints (h <= 0); it is the start point.
struct RidgeProblem {
  Eigen::MatrixXd design;
  Eigen::VectorXd target;
  double gamma = 0.0;
  std::vector<bool> penalized;  // empty = all columns penalized
  Eigen::MatrixXd constraint_matrix;  // rows x columns(design); may have zero rows
  Eigen::VectorXd constraint_rhs;
};

struct QpOptions {
  int max_iterations = 2000;
  double kkt_tolerance = 1e-9;
};

struct QpResult {
  Eigen::VectorXd theta;
  Eigen::VectorXd multipliers;  // one per constraint row, >= 0
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

double ridge_objective(const RidgeProblem& p, const Eigen::VectorXd& theta);

// Scaled KKT residual: stationarity relative to max(1, |X'y|_inf), plus primal
// and dual infeasibility and complementarity.
double ridge_kkt_residual(const RidgeProblem& p, const Eigen::VectorXd& theta,
                          const Eigen::VectorXd& multipliers);

// Primal active-set method. Throws NumericalError on iteration cap or when the
// final point misses the KKT tolerance.
QpResult qp_ridge_constrained(const RidgeProblem& problem, const QpOptions& options = {});

}  // namespace locker::optim
