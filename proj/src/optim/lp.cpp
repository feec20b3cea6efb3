#include "locker/optim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace locker::optim {

const char* sense_symbol(Sense sense) {
  switch (sense) {
    case Sense::kLessEqual: return "<=";
    case Sense::kEqual: return "=";
    case Sense::kGreaterEqual: return ">=";
  }
  return "?";
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

int LpModel::add_variable(double lo, double hi, double obj, std::string name) {
  lower.push_back(lo);
  upper.push_back(hi);
  objective.push_back(obj);
  names.push_back(std::move(name));
  return num_variables() - 1;
}

void LpModel::add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                             std::string name) {
  constraints.push_back({std::move(terms), sense, rhs, std::move(name)});
}

namespace {

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper };

enum class PhaseResult { kOptimal, kUnbounded };

// Dense tableau over variables shifted to a zero lower bound. Nonbasic
// variables sit at 0 or at their upper bound; basic values live in `beta`.
class BoundedSimplex {
 public:
  BoundedSimplex(int rows, int cols, const LpOptions& options)
      : rows_(rows),
        cols_(cols),
        tab_(static_cast<size_t>(rows) * cols, 0.0),
        beta_(rows, 0.0),
        basis_(rows, -1),
        state_(cols, VarState::kAtLower),
        upper_(cols, kInfinity),
        reduced_(cols, 0.0),
        options_(options) {
    max_iterations_ = options.max_iterations > 0 ? options.max_iterations
                                                 : 200 * (rows + cols) + 1000;
  }

  double& at(int r, int c) { return tab_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return tab_[static_cast<size_t>(r) * cols_ + c]; }

  void set_upper(int col, double ub) { upper_[col] = ub; }
  double upper(int col) const { return upper_[col]; }
  void set_basic(int row, int col, double value) {
    basis_[row] = col;
    state_[col] = VarState::kBasic;
    beta_[row] = value;
  }
  int basic(int row) const { return basis_[row]; }
  double beta(int row) const { return beta_[row]; }
  void clamp_beta(int row, double value) { beta_[row] = value; }
  int iterations() const { return iterations_; }

  double value(int col) const {
    if (state_[col] == VarState::kAtUpper) return upper_[col];
    if (state_[col] == VarState::kAtLower) return 0.0;
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] == col) return beta_[r];
    return 0.0;
  }

  PhaseResult run(const std::vector<double>& cost) {
    // d_j = c_j - sum_i c_B(i) * T(i, j)
    reduced_ = cost;
    for (int r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &tab_[static_cast<size_t>(r) * cols_];
      for (int c = 0; c < cols_; ++c) reduced_[c] -= cb * row[c];
    }
    const double tol = options_.tolerance;
    int degenerate_run = 0;
    for (;;) {
      if (++iterations_ > max_iterations_) {
        std::ostringstream msg;
        msg << "simplex iteration cap (" << max_iterations_ << ") exceeded on " << rows_
            << "x" << cols_ << " tableau";
        throw NumericalError(msg.str());
      }
      const bool bland = degenerate_run >= options_.degenerate_switch;
      int entering = -1;
      double best = 0.0;
      for (int c = 0; c < cols_; ++c) {
        if (state_[c] == VarState::kBasic || upper_[c] <= 0.0) continue;
        const double d = reduced_[c];
        const bool improving = (state_[c] == VarState::kAtLower && d > tol) ||
                               (state_[c] == VarState::kAtUpper && d < -tol);
        if (!improving) continue;
        if (bland) {
          entering = c;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = c;
        }
      }
      if (entering < 0) return PhaseResult::kOptimal;

      const double dir = state_[entering] == VarState::kAtLower ? 1.0 : -1.0;
      double step = upper_[entering];
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int r = 0; r < rows_; ++r) {
        const double alpha = dir * at(r, entering);
        double limit;
        bool to_upper;
        if (alpha > tol) {
          limit = std::max(0.0, beta_[r]) / alpha;
          to_upper = false;
        } else if (alpha < -tol && std::isfinite(upper_[basis_[r]])) {
          limit = std::max(0.0, upper_[basis_[r]] - beta_[r]) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        const bool strictly_less = limit < step - 1e-12;
        const bool tie = !strictly_less && limit <= step + 1e-12 && leave_row >= 0 &&
                         basis_[r] < basis_[leave_row];
        if (strictly_less || tie) {
          step = limit;
          leave_row = r;
          leave_to_upper = to_upper;
        }
      }
      if (leave_row < 0 && !std::isfinite(step)) return PhaseResult::kUnbounded;

      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, entering);
        if (a != 0.0) beta_[r] -= step * dir * a;
      }
      degenerate_run = step <= tol ? degenerate_run + 1 : 0;

      if (leave_row < 0) {
        state_[entering] =
            state_[entering] == VarState::kAtLower ? VarState::kAtUpper : VarState::kAtLower;
        continue;
      }
      const int leaving = basis_[leave_row];
      state_[leaving] = leave_to_upper ? VarState::kAtUpper : VarState::kAtLower;
      const double entering_value = dir > 0 ? step : upper_[entering] - step;
      pivot(leave_row, entering);
      basis_[leave_row] = entering;
      state_[entering] = VarState::kBasic;
      beta_[leave_row] = entering_value;
    }
  }

 private:
  void pivot(int pr, int pc) {
    double* prow = &tab_[static_cast<size_t>(pr) * cols_];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c < cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &tab_[static_cast<size_t>(r) * cols_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c < cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    const double f = reduced_[pc];
    if (f != 0.0) {
      for (int c = 0; c < cols_; ++c) reduced_[c] -= f * prow[c];
      reduced_[pc] = 0.0;
    }
  }

  int rows_;
  int cols_;
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  std::vector<double> upper_;
  std::vector<double> reduced_;
  LpOptions options_;
  int iterations_ = 0;
  int max_iterations_ = 0;
};

}  // namespace

LpResult lp_solve(const LpModel& model, const LpOptions& options) {
  const int n = model.num_variables();
  const int m = model.num_constraints();
  LpResult result;

  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(model.lower[j]))
      throw std::invalid_argument("lp_solve: variable lower bounds must be finite");
    if (model.upper[j] < model.lower[j] - options.tolerance) return result;  // infeasible
  }

  // Column layout: structural | slack (one per inequality) | artificial.
  std::vector<int> slack_col(m, -1);
  int cols = n;
  for (int i = 0; i < m; ++i)
    if (model.constraints[i].sense != Sense::kEqual) slack_col[i] = cols++;

  std::vector<std::vector<double>> dense(m, std::vector<double>(n, 0.0));
  std::vector<double> rhs(m);
  std::vector<double> slack_sign(m, 0.0);
  std::vector<bool> needs_artificial(m, false);
  for (int i = 0; i < m; ++i) {
    const auto& con = model.constraints[i];
    double b = con.rhs;
    for (const auto& t : con.terms) {
      dense[i][t.var] += t.coef;
      b -= t.coef * model.lower[t.var];
    }
    double sign = 1.0;
    if (con.sense == Sense::kLessEqual) slack_sign[i] = 1.0;
    if (con.sense == Sense::kGreaterEqual) slack_sign[i] = -1.0;
    if (b < 0.0) sign = -1.0;
    for (double& a : dense[i]) a *= sign;
    slack_sign[i] *= sign;
    rhs[i] = b * sign;
    needs_artificial[i] = slack_sign[i] != 1.0;
  }
  std::vector<int> artificial_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (needs_artificial[i]) artificial_col[i] = cols++;

  BoundedSimplex simplex(m, cols, options);
  for (int j = 0; j < n; ++j) simplex.set_upper(j, model.upper[j] - model.lower[j]);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) simplex.at(i, j) = dense[i][j];
    if (slack_col[i] >= 0) simplex.at(i, slack_col[i]) = slack_sign[i];
    if (artificial_col[i] >= 0) {
      simplex.at(i, artificial_col[i]) = 1.0;
      simplex.set_basic(i, artificial_col[i], rhs[i]);
    } else {
      simplex.set_basic(i, slack_col[i], rhs[i]);
    }
  }

  const bool has_artificial =
      std::any_of(artificial_col.begin(), artificial_col.end(), [](int c) { return c >= 0; });
  if (has_artificial) {
    std::vector<double> cost(cols, 0.0);
    for (int c : artificial_col)
      if (c >= 0) cost[c] = -1.0;
    simplex.run(cost);
    double infeasibility = 0.0;
    for (int c : artificial_col)
      if (c >= 0) infeasibility += simplex.value(c);
    if (infeasibility > 1e-7) {
      result.status = LpStatus::kInfeasible;
      result.iterations = simplex.iterations();
      return result;
    }
    for (int c : artificial_col)
      if (c >= 0) simplex.set_upper(c, 0.0);
    for (int r = 0; r < m; ++r)
      if (std::find(artificial_col.begin(), artificial_col.end(), simplex.basic(r)) !=
          artificial_col.end())
        simplex.clamp_beta(r, 0.0);
  }

  std::vector<double> cost(cols, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = model.objective[j];
  if (simplex.run(cost) == PhaseResult::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    result.iterations = simplex.iterations();
    return result;
  }

  result.values.assign(n, 0.0);
  for (int j = 0; j < n; ++j) result.values[j] = model.lower[j] + simplex.value(j);
  result.objective = model.objective_offset;
  for (int j = 0; j < n; ++j) result.objective += model.objective[j] * result.values[j];
  result.iterations = simplex.iterations();
  result.status = LpStatus::kOptimal;

  for (int i = 0; i < m; ++i) {
    const auto& con = model.constraints[i];
    const double act = activity(con.terms, result.values);
    const double slackness = 1e-6 * (1.0 + std::abs(con.rhs));
    const bool ok = (con.sense == Sense::kLessEqual && act <= con.rhs + slackness) ||
                    (con.sense == Sense::kGreaterEqual && act >= con.rhs - slackness) ||
                    (con.sense == Sense::kEqual && std::abs(act - con.rhs) <= slackness);
    if (!ok) {
      std::ostringstream msg;
      msg << "lp_solve: constraint " << i << " (" << con.name << ") violated after simplex: "
          << act << " " << sense_symbol(con.sense) << " " << con.rhs;
      throw NumericalError(msg.str());
    }
  }
  return result;
}

}  // namespace locker::optim
