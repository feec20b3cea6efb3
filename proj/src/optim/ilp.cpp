#include "locker/optim/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "locker/optim/lp.hpp"

namespace locker::optim {

const char* to_string(IlpStatus status) {
  return status == IlpStatus::kOptimal ? "optimal" : "infeasible";
}

int IntModel::add_variable(int lo, int hi, double obj, std::string name) {
  lower.push_back(lo);
  upper.push_back(hi);
  objective.push_back(obj);
  names.push_back(std::move(name));
  return num_variables() - 1;
}

void IntModel::add_constraint(std::vector<LinearTerm> terms, Sense sense, double rhs,
                              std::string name) {
  constraints.push_back({std::move(terms), sense, rhs, std::move(name)});
}

bool IntModel::is_feasible(const std::vector<int>& x, double tol) const {
  if (static_cast<int>(x.size()) != num_variables()) return false;
  for (int j = 0; j < num_variables(); ++j)
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  for (const auto& con : constraints) {
    const double act = activity(con.terms, x);
    const double slack = tol * (1.0 + std::abs(con.rhs));
    switch (con.sense) {
      case Sense::kLessEqual:
        if (act > con.rhs + slack) return false;
        break;
      case Sense::kGreaterEqual:
        if (act < con.rhs - slack) return false;
        break;
      case Sense::kEqual:
        if (std::abs(act - con.rhs) > slack) return false;
        break;
    }
  }
  return true;
}

double IntModel::evaluate(const std::vector<int>& x) const {
  double value = objective_offset;
  for (int j = 0; j < num_variables(); ++j) value += objective[j] * x[j];
  return value;
}

namespace {

std::string var_name(const IntModel& m, int j) {
  if (!m.names[j].empty()) return m.names[j];
  return "x" + std::to_string(j);
}

void write_terms(std::ostringstream& out, const IntModel& m,
                 const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    out << (t.coef < 0 ? " - " : (first ? " " : " + "));
    const double a = std::abs(t.coef);
    if (a != 1.0) out << a << " ";
    out << var_name(m, t.var);
    first = false;
  }
  if (first) out << " 0";
}

}  // namespace

std::string IntModel::to_lp_format() const {
  std::ostringstream out;
  out.precision(17);
  out << (feasibility_only ? "\\ feasibility model\n" : "") << "Maximize\n obj:";
  std::vector<LinearTerm> obj;
  for (int j = 0; j < num_variables(); ++j)
    if (objective[j] != 0.0) obj.push_back({j, objective[j]});
  write_terms(out, *this, obj);
  if (objective_offset != 0.0) out << " + " << objective_offset << " __offset";
  out << "\nSubject To\n";
  for (int i = 0; i < num_constraints(); ++i) {
    const auto& con = constraints[i];
    out << " " << (con.name.empty() ? "c" + std::to_string(i) : con.name) << ":";
    write_terms(out, *this, con.terms);
    out << " " << sense_symbol(con.sense) << " " << con.rhs << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < num_variables(); ++j)
    out << " " << lower[j] << " <= " << var_name(*this, j) << " <= " << upper[j] << "\n";
  if (objective_offset != 0.0) out << " __offset = 1\n";
  out << "General\n";
  for (int j = 0; j < num_variables(); ++j) out << " " << var_name(*this, j) << "\n";
  out << "End\n";
  return out.str();
}

namespace {

struct Row {
  std::vector<LinearTerm> terms;  // sum terms <= rhs
  double rhs;
};

class BranchAndBound {
 public:
  BranchAndBound(const IntModel& model, const IlpOptions& options)
      : model_(model), options_(options) {
    for (const auto& con : model.constraints) {
      if (con.sense != Sense::kGreaterEqual) rows_.push_back({con.terms, con.rhs});
      if (con.sense != Sense::kLessEqual) {
        Row neg{con.terms, -con.rhs};
        for (auto& t : neg.terms) t.coef = -t.coef;
        rows_.push_back(std::move(neg));
      }
    }
    if (options_.use_lp_bound) {
      for (int j = 0; j < model.num_variables(); ++j)
        lp_.add_variable(model.lower[j], model.upper[j],
                         model.feasibility_only ? 0.0 : model.objective[j]);
      for (const auto& con : model.constraints) lp_.add_constraint(con.terms, con.sense, con.rhs);
      lp_.objective_offset = model.objective_offset;
    }
  }

  IlpResult run() {
    std::vector<int> lo = model_.lower;
    std::vector<int> hi = model_.upper;
    for (int j = 0; j < model_.num_variables(); ++j)
      if (lo[j] > hi[j]) return result_;
    search(lo, hi);
    return result_;
  }

 private:
  double tolerance() const { return 1e-9 * std::max(1.0, std::abs(result_.objective)); }
  bool have_incumbent() const { return result_.status == IlpStatus::kOptimal; }
  bool done() const { return model_.feasibility_only && have_incumbent(); }

  // Tighten integer bounds to a fixpoint; false when a row cannot be met.
  bool propagate(std::vector<int>& lo, std::vector<int>& hi) const {
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (const auto& row : rows_) {
        double min_act = 0.0;
        for (const auto& t : row.terms) min_act += t.coef * (t.coef > 0 ? lo[t.var] : hi[t.var]);
        const double room = row.rhs - min_act;
        if (room < -1e-9 * (1.0 + std::abs(row.rhs))) return false;
        for (const auto& t : row.terms) {
          if (t.coef > 0) {
            const double limit = lo[t.var] + room / t.coef;
            const int bound = static_cast<int>(std::floor(limit + 1e-9));
            if (bound < hi[t.var]) {
              hi[t.var] = bound;
              changed = true;
            }
          } else if (t.coef < 0) {
            const double limit = hi[t.var] + room / t.coef;
            const int bound = static_cast<int>(std::ceil(limit - 1e-9));
            if (bound > lo[t.var]) {
              lo[t.var] = bound;
              changed = true;
            }
          }
          if (lo[t.var] > hi[t.var]) return false;
        }
      }
      if (!changed) return true;
    }
    return true;
  }

  void offer(const std::vector<int>& x) {
    if (!model_.is_feasible(x, 1e-7)) return;
    const double value = model_.feasibility_only ? 0.0 : model_.evaluate(x);
    if (!have_incumbent() || value > result_.objective + tolerance()) {
      result_.status = IlpStatus::kOptimal;
      result_.objective = value;
      result_.values = x;
    }
  }

  void count_node() {
    ++result_.nodes;
    if (options_.node_limit > 0 && result_.nodes > options_.node_limit)
      throw NumericalError("ilp_solve: node limit exceeded (" +
                           std::to_string(options_.node_limit) + ")");
  }

  void search(std::vector<int> lo, std::vector<int> hi) {
    if (done()) return;
    count_node();
    if (!propagate(lo, hi)) return;
    const int n = model_.num_variables();
    if (options_.use_lp_bound) {
      search_lp(lo, hi);
      return;
    }
    double bound = model_.objective_offset;
    int free_var = -1;
    for (int j = 0; j < n; ++j) {
      const double c = model_.objective[j];
      bound += std::max(c * lo[j], c * hi[j]);
      if (free_var < 0 && lo[j] < hi[j]) free_var = j;
    }
    if (!model_.feasibility_only && have_incumbent() && bound <= result_.objective + tolerance())
      return;
    if (free_var < 0) {
      offer(lo);
      return;
    }
    const bool up_first = !model_.feasibility_only && model_.objective[free_var] > 0;
    const int a = lo[free_var];
    const int b = hi[free_var];
    for (int k = 0; k <= b - a; ++k) {
      const int v = up_first ? b - k : a + k;
      lo[free_var] = hi[free_var] = v;
      search(lo, hi);
      if (done()) return;
    }
  }

  void search_lp(const std::vector<int>& lo, const std::vector<int>& hi) {
    const int n = model_.num_variables();
    LpModel node = lp_;
    for (int j = 0; j < n; ++j) {
      node.lower[j] = lo[j];
      node.upper[j] = hi[j];
    }
    const LpResult lp = lp_solve(node);
    if (lp.status == LpStatus::kInfeasible) return;
    if (lp.status == LpStatus::kUnbounded)
      throw NumericalError("ilp_solve: LP relaxation unbounded despite finite bounds");
    if (!model_.feasibility_only && have_incumbent() &&
        lp.objective <= result_.objective + tolerance())
      return;

    int branch_var = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(lp.values[j] - std::round(lp.values[j])) > 1e-6) {
        branch_var = j;
        break;
      }
    }
    if (branch_var < 0) {
      std::vector<int> x(n);
      for (int j = 0; j < n; ++j)
        x[j] = std::clamp(static_cast<int>(std::lround(lp.values[j])), lo[j], hi[j]);
      if (model_.is_feasible(x, 1e-7)) {
        offer(x);
        return;
      }
      // Rounding broke feasibility: split the first unfixed variable instead.
      for (int j = 0; j < n; ++j) {
        if (lo[j] < hi[j]) {
          branch_var = j;
          break;
        }
      }
      if (branch_var < 0) return;
    }
    const double v = lp.values[branch_var];
    int down = static_cast<int>(std::floor(v));
    if (down >= hi[branch_var]) down = hi[branch_var] - 1;
    if (down < lo[branch_var]) down = lo[branch_var];
    const bool down_first = v - down <= 0.5;
    std::vector<int> dlo = lo, dhi = hi, ulo = lo, uhi = hi;
    dhi[branch_var] = down;
    ulo[branch_var] = down + 1;
    if (down_first) {
      search(dlo, dhi);
      search(ulo, uhi);
    } else {
      search(ulo, uhi);
      search(dlo, dhi);
    }
  }

  const IntModel& model_;
  IlpOptions options_;
  std::vector<Row> rows_;
  LpModel lp_;
  IlpResult result_;
};

}  // namespace

IlpResult ilp_solve(const IntModel& model, const IlpOptions& options) {
  for (int j = 0; j < model.num_variables(); ++j)
    if (model.lower[j] > model.upper[j]) return {};
  if (model.num_variables() == 0) {
    IlpResult r;
    r.nodes = 1;
    if (model.is_feasible({})) {
      r.status = IlpStatus::kOptimal;
      r.objective = model.feasibility_only ? 0.0 : model.objective_offset;
    }
    return r;
  }
  BranchAndBound bb(model, options);
  return bb.run();
}

}  // namespace locker::optim
