#pragma once
// Brute-force references for the optimization engine. Deliberately naive:
// they share no code with the solvers they check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "locker/optim/ilp.hpp"
#include "locker/optim/lp.hpp"
#include "locker/optim/qp.hpp"

namespace locker::oracle {

using namespace optim;

struct VertexOptimum {
  LpStatus status = LpStatus::kInfeasible;
  double objective = -kInfinity;
};

// Max over every basic solution of a box-bounded polytope.
inline VertexOptimum enumerate_vertices(const LpModel& m) {
  const int n = m.num_variables();
  struct Plane {
    Eigen::VectorXd a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& con : m.constraints) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& t : con.terms) a(t.var) += t.coef;
    planes.push_back({a, con.rhs});
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
    planes.push_back({e, m.lower[j]});
    planes.push_back({e, m.upper[j]});
  }
  const int p = static_cast<int>(planes.size());
  VertexOptimum best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int r = 0; r < n; ++r) {
        a.row(r) = planes[pick[r]].a.transpose();
        b(r) = planes[pick[r]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      std::vector<double> xs(x.data(), x.data() + n);
      for (int j = 0; j < n; ++j)
        if (xs[j] < m.lower[j] - 1e-9 || xs[j] > m.upper[j] + 1e-9) return;
      for (const auto& con : m.constraints) {
        const double act = activity(con.terms, xs);
        if (con.sense == Sense::kLessEqual && act > con.rhs + 1e-9) return;
        if (con.sense == Sense::kGreaterEqual && act < con.rhs - 1e-9) return;
        if (con.sense == Sense::kEqual && std::abs(act - con.rhs) > 1e-9) return;
      }
      double obj = m.objective_offset;
      for (int j = 0; j < n; ++j) obj += m.objective[j] * xs[j];
      best.status = LpStatus::kOptimal;
      best.objective = std::max(best.objective, obj);
      return;
    }
    for (int i = start; i < p; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

inline LpModel random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvar(1, 6), ncon(1, 5), coef(-5, 5), ub(1, 8), sense(0, 4);
  LpModel m;
  const int n = nvar(rng);
  for (int j = 0; j < n; ++j) m.add_variable(0.0, ub(rng), coef(rng));
  const int k = ncon(rng);
  for (int i = 0; i < k; ++i) {
    std::vector<LinearTerm> terms;
    for (int j = 0; j < n; ++j) {
      const int c = coef(rng);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    const int s = sense(rng);
    const Sense sn = s < 2 ? Sense::kLessEqual : (s < 4 ? Sense::kGreaterEqual : Sense::kEqual);
    m.add_constraint(terms, sn, coef(rng) * 2.0);
  }
  return m;
}

struct Enumerated {
  bool feasible = false;
  double objective = 0.0;
};

// Exhaustive walk over the integer box.
inline Enumerated enumerate_box(const IntModel& m) {
  Enumerated best;
  const int n = m.num_variables();
  std::vector<int> x(m.lower);
  for (;;) {
    if (m.is_feasible(x)) {
      const double v = m.evaluate(x);
      if (!best.feasible || v > best.objective) best = {true, v};
    }
    int j = 0;
    while (j < n && x[j] == m.upper[j]) {
      x[j] = m.lower[j];
      ++j;
    }
    if (j == n) break;
    ++x[j];
  }
  return best;
}

inline IntModel random_int_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvar(1, 8), ncon(0, 5), coef(-4, 4), hi(1, 4), lo(-1, 0),
      sense(0, 5);
  IntModel m;
  const int n = nvar(rng);
  for (int j = 0; j < n; ++j) {
    const int l = rng() % 4 == 0 ? lo(rng) : 0;
    m.add_variable(l, hi(rng), coef(rng) + 0.25 * coef(rng));
  }
  const int k = ncon(rng);
  for (int i = 0; i < k; ++i) {
    std::vector<LinearTerm> terms;
    for (int j = 0; j < n; ++j) {
      const int c = coef(rng);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    const int s = sense(rng);
    const Sense sn = s < 3 ? Sense::kLessEqual : (s < 5 ? Sense::kGreaterEqual : Sense::kEqual);
    m.add_constraint(terms, sn, coef(rng) + 2.0);
  }
  return m;
}

// Fixed-step projected gradient; each projection onto {G x >= h} is computed
// by Dykstra's alternating projections over the half-spaces.
inline Eigen::VectorXd projected_gradient(const RidgeProblem& p, long steps) {
  const Eigen::Index n = p.design.cols();
  Eigen::MatrixXd h = 2.0 * p.design.transpose() * p.design;
  for (Eigen::Index j = 0; j < n; ++j)
    if (p.penalized.empty() || p.penalized[j]) h(j, j) += 2.0 * p.gamma;
  const Eigen::VectorXd lin = 2.0 * p.design.transpose() * p.target;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;
  const Eigen::Index m = p.constraint_matrix.rows();

  auto project = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd x = z;
    std::vector<Eigen::VectorXd> corr(static_cast<size_t>(m), Eigen::VectorXd::Zero(n));
    for (int sweep = 0; sweep < 500; ++sweep) {
      double moved = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::VectorXd a = p.constraint_matrix.row(i).transpose();
        const Eigen::VectorXd before = x + corr[i];
        const double viol = p.constraint_rhs(i) - a.dot(before);
        Eigen::VectorXd proj = before;
        if (viol > 0) proj += viol / a.squaredNorm() * a;
        corr[i] = before - proj;
        moved = std::max(moved, (proj - x).cwiseAbs().maxCoeff());
        x = proj;
      }
      if (moved < 1e-16) break;
    }
    return x;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (long k = 0; k < steps; ++k) x = project(x - step * (h * x - lin));
  return x;
}

}  // namespace locker::oracle
