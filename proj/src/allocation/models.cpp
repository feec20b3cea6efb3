#include "locker/allocation/models.hpp"

#include <stdexcept>
#include <string>

#include "locker/allocation/windows.hpp"

namespace locker::allocation {

using optim::IntModel;
using optim::LinearTerm;
using optim::Sense;

namespace {

std::string idx(const char* base, std::initializer_list<int> ks) {
  std::string s = base;
  for (int k : ks) s += "_" + std::to_string(k);
  return s;
}

// Σ_c Σ_{h=1}^{B-f} l_δch
int fixed_at(const ProblemConfig& cfg, const Occupancy& L, int delta, int f) {
  int n = 0;
  for (int c = 1; c <= cfg.C; ++c)
    for (int h = 1; h <= cfg.B - f && h <= cfg.B - 1; ++h) n += L(delta - 1, c - 1, h - 1);
  return n;
}

// (cap1)-(all), shared by the feasibility and CFA models. `slack` holds s_δf
// variables when the capacity rows are equalities.
void add_plan_rows(IntModel& m, const ProblemConfig& cfg, const Occupancy& L, const Orders& O,
                   const Grid3<int>& y, const std::vector<std::vector<int>>* slack) {
  const int D = cfg.D, C = cfg.C, F = cfg.F, B = cfg.B;
  const Sense cap_sense = slack ? Sense::kEqual : Sense::kLessEqual;
  for (int d = 1; d <= D; ++d) {
    for (int f = 1; f <= std::min(F, B - 1); ++f) {
      std::vector<LinearTerm> t;
      for (int c = 1; c <= C; ++c)
        for (int j = 1; j <= f; ++j) t.push_back({y(d - 1, c - 1, j - 1), 1.0});
      if (slack) t.push_back({(*slack)[d - 1][f - 1], 1.0});
      m.add_constraint(std::move(t), cap_sense, cfg.capacity(d) - fixed_at(cfg, L, d, f),
                       idx("cap1", {d, f}));
    }
    for (int f = B; f <= F; ++f) {
      std::vector<LinearTerm> t;
      for (int c = 1; c <= C; ++c)
        for (int j = 0; j <= B - 1; ++j) t.push_back({y(d - 1, c - 1, f - j - 1), 1.0});
      if (slack) t.push_back({(*slack)[d - 1][f - 1], 1.0});
      m.add_constraint(std::move(t), cap_sense, cfg.capacity(d), idx("cap2", {d, f}));
    }
  }
  for (int c = 1; c <= C; ++c)
    for (int f = 1; f <= F; ++f) {
      int eligible = 0;
      std::vector<LinearTerm> t;
      for (int d = 1; d <= D; ++d) {
        eligible += O(d - 1, c - 1, f - 1);
        t.push_back({y(d - 1, c - 1, f - 1), 1.0});
        if (d < D) m.add_constraint(t, Sense::kLessEqual, eligible, idx("order_mix", {d, c, f}));
      }
      m.add_constraint(std::move(t), Sense::kEqual, eligible, idx("all", {c, f}));
    }
}

}  // namespace

FeasibilityModel feasibility_model(const ProblemConfig& cfg, const Occupancy& L, const Orders& orders) {
  FeasibilityModel fm;
  fm.model.feasibility_only = true;
  fm.y = Grid3<int>(cfg.D, cfg.C, cfg.F, -1);
  for (int d = 1; d <= cfg.D; ++d)
    for (int c = 1; c <= cfg.C; ++c)
      for (int f = 1; f <= cfg.F; ++f)
        fm.y(d - 1, c - 1, f - 1) = fm.model.add_variable(0, cfg.capacity(d), 0.0, idx("y", {d, c, f}));
  add_plan_rows(fm.model, cfg, L, orders, fm.y, nullptr);
  return fm;
}

CfaModel cfa_model(const ProblemConfig& cfg, const Occupancy& L, const Orders& O, Scheme scheme,
                   CfaObjective objective, const Mutations& mut) {
  const int D = cfg.D, C = cfg.C, F = cfg.F;
  CfaModel cm;
  IntModel& m = cm.model;
  cm.y = Grid3<int>(D, C, F, -1);
  cm.a = Grid3<int>(D, D, C, -1);
  cm.wf = Grid3<int>(D, F, F, -1);
  cm.s.assign(D, std::vector<int>(F, -1));
  cm.w.assign(D, std::vector<int>(F, -1));

  for (int d = 1; d <= D; ++d)
    for (int c = 1; c <= C; ++c)
      for (int f = 1; f <= F; ++f)
        cm.y(d - 1, c - 1, f - 1) = m.add_variable(0, cfg.capacity(d), 0.0, idx("y", {d, c, f}));
  for (int d = 1; d <= D; ++d)
    for (int delta = d; delta <= D; ++delta)
      for (int c = 1; c <= C; ++c)
        cm.a(d - 1, delta - 1, c - 1) = m.add_variable(0, O(d - 1, c - 1, 0), 0.0, idx("a", {d, delta, c}));
  for (int d = 1; d <= D; ++d)
    for (int f = 1; f <= F; ++f) cm.s[d - 1][f - 1] = m.add_variable(0, cfg.capacity(d), 0.0, idx("s", {d, f}));
  for (int d = 1; d <= D; ++d)
    for (int f = 1; f <= F; ++f)
      for (int l = 1; l <= F - f + 1; ++l)
        cm.wf(d - 1, l - 1, f - 1) = m.add_variable(0, cfg.capacity(d), 0.0, idx("wf", {d, l, f}));
  for (int d = 1; d <= D; ++d)
    for (int l = 1; l <= F; ++l)
      cm.w[d - 1][l - 1] = m.add_variable(0, cfg.capacity(d) * F, 0.0, idx("w", {d, l}));

  add_plan_rows(m, cfg, L, O, cm.y, &cm.s);

  for (int delta = 1; delta <= D; ++delta)
    for (int c = 1; c <= C; ++c) {
      std::vector<LinearTerm> t{{cm.y(delta - 1, c - 1, 0), 1.0}};
      for (int d = 1; d <= delta; ++d) t.push_back({cm.a(d - 1, delta - 1, c - 1), -1.0});
      m.add_constraint(std::move(t), Sense::kEqual, 0.0, idx("allocate1", {delta, c}));
    }
  for (int d = 1; d <= D; ++d)
    for (int c = 1; c <= C; ++c) {
      std::vector<LinearTerm> t;
      for (int delta = d; delta <= D; ++delta) t.push_back({cm.a(d - 1, delta - 1, c - 1), 1.0});
      m.add_constraint(std::move(t), Sense::kEqual, O(d - 1, c - 1, 0), idx("allocate2", {d, c}));
    }
  for (int d = 1; d <= D; ++d) {
    for (int f = 1; f <= F; ++f) {
      std::vector<LinearTerm> t;
      for (int j = 1; j <= f; ++j)
        for (int l = f - j + 1; l <= F - j + 1; ++l) t.push_back({cm.wf(d - 1, l - 1, j - 1), 1.0});
      t.push_back({cm.s[d - 1][f - 1], -1.0});
      m.add_constraint(std::move(t), Sense::kEqual, 0.0, idx("s_to_w", {d, f}));
    }
    for (int f = 2; f <= F; ++f) {
      std::vector<LinearTerm> t;
      for (int j = 1; j <= f - 1; ++j) t.push_back({cm.wf(d - 1, j - 1, f - j - 1), 1.0});
      const int g = f + mut.w_end_shift;
      if (g >= 1 && g <= F)
        for (int c = 1; c <= C; ++c) t.push_back({cm.y(d - 1, c - 1, g - 1), -1.0});
      m.add_constraint(std::move(t), Sense::kLessEqual, 0.0, idx("w_end", {d, f}));
    }
    for (int l = 1; l <= F; ++l) {
      std::vector<LinearTerm> t{{cm.w[d - 1][l - 1], 1.0}};
      for (int f = 1; f <= F - l + 1; ++f) t.push_back({cm.wf(d - 1, l - 1, f - 1), -1.0});
      m.add_constraint(std::move(t), Sense::kEqual, 0.0, idx("wf_to_w", {d, l}));
    }
  }

  if (scheme == Scheme::kBU) {
    for (int d = 1; d <= D; ++d) m.objective[cm.s[d - 1][0]] = d;
    return cm;
  }
  const auto v = cfa_coefficients(scheme, cfg, F, mut);
  for (int d = 1; d <= D; ++d)
    for (int l = 1; l <= F; ++l) {
      const double size_first = d * l, length_first = 2.0 * l - 1.0;
      const double primary = scheme == Scheme::kDL ? size_first : length_first;
      const double secondary = scheme == Scheme::kDL ? length_first : size_first;
      double coef = v[d - 1][l - 1];
      if (objective == CfaObjective::kPrimary) coef = primary;
      if (objective == CfaObjective::kSecondary) coef = secondary;
      m.objective[cm.w[d - 1][l - 1]] = coef;
    }
  return cm;
}

void add_primary_floor(CfaModel& m, const ProblemConfig& cfg, Scheme scheme, long floor) {
  std::vector<LinearTerm> t;
  for (int d = 1; d <= cfg.D; ++d)
    for (int l = 1; l <= cfg.F; ++l)
      t.push_back({m.w[d - 1][l - 1], scheme == Scheme::kDL ? d * l : 2.0 * l - 1.0});
  m.primary_row = m.model.num_constraints();
  m.model.add_constraint(std::move(t), Sense::kGreaterEqual, static_cast<double>(floor), "primary_floor");
}

std::vector<std::vector<int>> worst_case_fixed(const ProblemConfig& cfg, const Occupancy& L, int horizon) {
  std::vector<std::vector<int>> fixed(cfg.D, std::vector<int>(horizon, 0));
  for (int d = 1; d <= cfg.D; ++d)
    for (int f = 1; f <= horizon; ++f) fixed[d - 1][f - 1] = fixed_at(cfg, L, d, f);
  return fixed;
}

AllocationMatrix split_by_customer(const ProblemConfig& cfg, const Orders& O, int f,
                                   const std::vector<int>& placed_by_size) {
  AllocationMatrix a = empty_allocation(cfg);
  Grid3<int> left(cfg.D, cfg.C, 1, 0);
  for (int d = 0; d < cfg.D; ++d)
    for (int c = 0; c < cfg.C; ++c) left(d, c, 0) = O(d, c, f - 1);
  for (int delta = cfg.D - 1; delta >= 0; --delta) {
    int need = placed_by_size[delta];
    for (int d = delta; d >= 0 && need > 0; --d)
      for (int c = 0; c < cfg.C && need > 0; ++c) {
        const int take = std::min(need, left(d, c, 0));
        a(d, delta, c) += take;
        left(d, c, 0) -= take;
        need -= take;
      }
    if (need > 0) throw std::logic_error("placement uses more compartments than orders");
  }
  if (left.sum() != 0) throw std::logic_error("placement leaves orders unallocated");
  return a;
}

std::vector<int> cfa_assignment(const CfaModel& m, const ProblemConfig& cfg, const Orders& O,
                                const std::vector<std::vector<int>>& placed_by_epoch,
                                const std::vector<std::vector<int>>& free) {
  std::vector<int> x(m.model.num_variables(), 0);
  for (int f = 1; f <= cfg.F; ++f) {
    const AllocationMatrix a = split_by_customer(cfg, O, f, placed_by_epoch[f - 1]);
    for (int d = 0; d < cfg.D; ++d)
      for (int delta = d; delta < cfg.D; ++delta)
        for (int c = 0; c < cfg.C; ++c) {
          x[m.y(delta, c, f - 1)] += a(d, delta, c);
          if (f == 1) x[m.a(d, delta, c)] = a(d, delta, c);
        }
  }
  for (int d = 0; d < cfg.D; ++d) {
    for (int f = 0; f < cfg.F; ++f) x[m.s[d][f]] = free[d][f];
    for (const Window& w : lifo_windows(free[d], d + 1)) {
      ++x[m.wf(d, w.length - 1, w.start - 1)];
      ++x[m.w[d][w.length - 1]];
    }
  }
  return x;
}

}  // namespace locker::allocation
