#include "locker/optim/qp.hpp"

#include <algorithm>
#include <sstream>

#include "locker/optim/linear.hpp"

namespace locker::optim {

namespace {

struct Halved {
  Eigen::MatrixXd hessian;  // X'X + gamma P
  Eigen::VectorXd linear;   // X'y
};

Halved halve(const RidgeProblem& p) {
  const Eigen::Index n = p.design.cols();
  Halved q;
  q.hessian = p.design.transpose() * p.design;
  for (Eigen::Index j = 0; j < n; ++j)
    if (p.penalized.empty() || p.penalized[j]) q.hessian(j, j) += p.gamma;
  q.linear = p.design.transpose() * p.target;
  return q;
}

// Solves [H -A'; A 0][x; mu] = [b; c] for the working rows A.
std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_kkt(const Eigen::MatrixXd& h,
                                                      const Eigen::MatrixXd& a,
                                                      const Eigen::VectorXd& b,
                                                      const Eigen::VectorXd& c) {
  const Eigen::Index n = h.rows();
  const Eigen::Index m = a.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = h;
  if (m > 0) {
    k.topRightCorner(n, m) = -a.transpose();
    k.bottomLeftCorner(m, n) = a;
  }
  Eigen::VectorXd rhs(n + m);
  rhs << b, c;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(k);
  Eigen::VectorXd sol = cod.solve(rhs);
  // One step of iterative refinement keeps the residual near machine precision.
  sol += cod.solve(rhs - k * sol);
  return {sol.head(n), sol.tail(m)};
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& g, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), g.cols());
  for (size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = g.row(idx[r]);
  return out;
}

}  // namespace

double ridge_objective(const RidgeProblem& p, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd r = p.target - p.design * theta;
  double pen = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    if (p.penalized.empty() || p.penalized[j]) pen += theta(j) * theta(j);
  return r.squaredNorm() + p.gamma * pen;
}

double ridge_kkt_residual(const RidgeProblem& p, const Eigen::VectorXd& theta,
                          const Eigen::VectorXd& multipliers) {
  const Halved q = halve(p);
  Eigen::VectorXd stat = q.hessian * theta - q.linear;
  if (p.constraint_matrix.rows() > 0) stat -= p.constraint_matrix.transpose() * multipliers;
  const double scale = std::max(1.0, q.linear.cwiseAbs().maxCoeff());
  double res = stat.cwiseAbs().maxCoeff() / scale;
  for (Eigen::Index i = 0; i < p.constraint_matrix.rows(); ++i) {
    const double slack = p.constraint_matrix.row(i).dot(theta) - p.constraint_rhs(i);
    res = std::max(res, -slack);
    res = std::max(res, -multipliers(i) / scale);
    res = std::max(res, std::abs(multipliers(i) * slack) / scale);
  }
  return res;
}

QpResult qp_ridge_constrained(const RidgeProblem& problem, const QpOptions& options) {
  const Eigen::Index n = problem.design.cols();
  const Eigen::Index m = problem.constraint_matrix.rows();
  const Eigen::MatrixXd& g = problem.constraint_matrix;
  const Eigen::VectorXd& h = problem.constraint_rhs;
  if (m > 0 && (g.cols() != n || h.size() != m))
    throw std::invalid_argument("qp_ridge_constrained: constraint shape mismatch");
  if (m > 0 && h.maxCoeff() > 1e-12)
    throw std::invalid_argument("qp_ridge_constrained: zero vector must be feasible");

  const Halved q = halve(problem);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  std::vector<int> working;
  std::vector<bool> in_working(static_cast<size_t>(m), false);
  const double step_tol = 1e-13;

  QpResult result;
  int it = 0;
  for (;; ++it) {
    if (it >= options.max_iterations) {
      std::ostringstream msg;
      msg << "qp_ridge_constrained: no convergence after " << it << " iterations, "
          << working.size() << " active constraints";
      throw NumericalError(msg.str());
    }
    const Eigen::MatrixXd a = rows_of(g, working);
    const auto [step, mu] = solve_kkt(q.hessian, a, q.linear - q.hessian * theta,
                                      Eigen::VectorXd::Zero(a.rows()));
    if (step.cwiseAbs().maxCoeff() <= step_tol * (1.0 + theta.cwiseAbs().maxCoeff())) {
      int drop = -1;
      double most_negative = -1e-12;
      for (size_t r = 0; r < working.size(); ++r) {
        if (mu(static_cast<Eigen::Index>(r)) < most_negative) {
          most_negative = mu(static_cast<Eigen::Index>(r));
          drop = static_cast<int>(r);
        }
      }
      if (drop < 0) break;
      in_working[working[drop]] = false;
      working.erase(working.begin() + drop);
      continue;
    }
    double alpha = 1.0;
    int blocking = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in_working[i]) continue;
      const double gp = g.row(i).dot(step);
      if (gp >= -1e-14) continue;
      const double ratio = std::max(0.0, (h(i) - g.row(i).dot(theta)) / gp);
      if (ratio < alpha) {
        alpha = ratio;
        blocking = static_cast<int>(i);
      }
    }
    theta += alpha * step;
    if (blocking >= 0) {
      in_working[blocking] = true;
      working.push_back(blocking);
    }
  }

  // Polish on the final face: solve for theta itself rather than a step.
  {
    const Eigen::MatrixXd a = rows_of(g, working);
    Eigen::VectorXd hw(static_cast<Eigen::Index>(working.size()));
    for (size_t r = 0; r < working.size(); ++r) hw(static_cast<Eigen::Index>(r)) = h(working[r]);
    auto [x, mu] = solve_kkt(q.hessian, a, q.linear, hw);
    bool ok = true;
    for (Eigen::Index i = 0; i < m; ++i)
      if (!in_working[i] && g.row(i).dot(x) < h(i) - 1e-12) ok = false;
    if (ok) theta = x;
    result.multipliers = Eigen::VectorXd::Zero(m);
    for (size_t r = 0; r < working.size(); ++r)
      result.multipliers(working[r]) = std::max(0.0, mu(static_cast<Eigen::Index>(r)));
  }

  result.theta = theta;
  result.iterations = it;
  result.objective = ridge_objective(problem, theta);
  result.kkt_residual = ridge_kkt_residual(problem, theta, result.multipliers);
  if (result.kkt_residual > options.kkt_tolerance) {
    std::ostringstream msg;
    msg << "qp_ridge_constrained: KKT residual " << result.kkt_residual << " exceeds "
        << options.kkt_tolerance << " (" << working.size() << " active, " << it
        << " iterations)";
    throw NumericalError(msg.str());
  }
  return result;
}

}  // namespace locker::optim
