#include "locker/allocation/plan.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

#include "locker/optim/ilp.hpp"

namespace locker::allocation {

using optim::IntModel;
using optim::LinearTerm;
using optim::Sense;

namespace {

void put(std::string& out, const void* p, size_t n) { out.append(static_cast<const char*>(p), n); }
void put_int(std::string& out, int v) { put(out, &v, sizeof v); }
void put_vec(std::string& out, const std::vector<double>& v) {
  put_int(out, static_cast<int>(v.size()));
  if (!v.empty()) put(out, v.data(), v.size() * sizeof(double));
}
void put_objective(std::string& out, const LinearObjective& o) {
  put_vec(out, o.a);
  put_vec(out, o.b);
  put_vec(out, o.c);
}

int sizes_of(const PlanProblem& p) { return static_cast<int>(p.capacity.size()); }

bool active(const OrderGroup& g, int f) { return f >= g.epoch && f < g.epoch + g.duration; }

struct Builder {
  const PlanProblem& p;
  int D;
  int H;
  std::vector<const OrderGroup*> groups;
  std::vector<std::vector<int>> y;  // [group][δ-1] -> var or -1
  std::vector<std::vector<int>> n;  // [δ-1][f-1] -> var or -1 (f >= 2)
  IntModel model;
  bool trivially_infeasible = false;

  explicit Builder(const PlanProblem& prob) : p(prob), D(sizes_of(prob)), H(prob.horizon) {
    for (const auto& g : p.groups) {
      int total = 0;
      for (int v : g.by_size) total += v;
      if (total > 0) groups.push_back(&g);
    }
  }

  // -Σ_g y * coefficient where s_δf = Q - fixed - Σ_g active(g,f) y(g,δ).
  void build(const LinearObjective* primary_floor_obj, double primary_floor, const LinearObjective& obj,
             bool with_objective) {
    model = IntModel{};
    model.feasibility_only = !with_objective;
    y.assign(groups.size(), std::vector<int>(D, -1));
    for (size_t g = 0; g < groups.size(); ++g) {
      const OrderGroup& grp = *groups[g];
      int total = 0, dmin = D;
      for (int d = 0; d < D; ++d) {
        total += grp.by_size[d];
        if (grp.by_size[d] > 0) dmin = std::min(dmin, d);
      }
      for (int d = dmin; d < D; ++d) y[g][d] = model.add_variable(0, std::min(total, p.capacity[d]));
    }
    const bool need_n = with_objective && needs_window_count(obj, primary_floor_obj);
    n.assign(D, std::vector<int>(H, -1));
    if (need_n)
      for (int d = 0; d < D; ++d)
        for (int f = 1; f < H; ++f) n[d][f] = model.add_variable(0, p.capacity[d]);

    // capacity
    for (int d = 0; d < D; ++d)
      for (int f = 0; f < H; ++f) {
        const int room = p.capacity[d] - p.fixed[d][f];
        if (room < 0) trivially_infeasible = true;
        std::vector<LinearTerm> terms;
        for (size_t g = 0; g < groups.size(); ++g)
          if (y[g][d] >= 0 && active(*groups[g], f + 1)) terms.push_back({y[g][d], 1.0});
        if (!terms.empty()) model.add_constraint(std::move(terms), Sense::kLessEqual, room);
      }
    // compatibility and completeness per group
    for (size_t g = 0; g < groups.size(); ++g) {
      const OrderGroup& grp = *groups[g];
      int eligible = 0;
      std::vector<LinearTerm> prefix;
      for (int d = 0; d < D; ++d) {
        eligible += grp.by_size[d];
        if (y[g][d] >= 0) prefix.push_back({y[g][d], 1.0});
        if (d + 1 < D && !prefix.empty()) model.add_constraint(prefix, Sense::kLessEqual, eligible);
      }
      model.add_constraint(prefix, Sense::kEqual, eligible);
    }
    // n_δf >= s_f - s_{f-1}
    if (need_n)
      for (int d = 0; d < D; ++d)
        for (int f = 1; f < H; ++f) {
          std::vector<LinearTerm> terms{{n[d][f], 1.0}};
          for (size_t g = 0; g < groups.size(); ++g) {
            if (y[g][d] < 0) continue;
            const int delta = (active(*groups[g], f + 1) ? 1 : 0) - (active(*groups[g], f) ? 1 : 0);
            if (delta != 0) terms.push_back({y[g][d], static_cast<double>(delta)});
          }
          model.add_constraint(std::move(terms), Sense::kGreaterEqual, p.fixed[d][f - 1] - p.fixed[d][f]);
        }
    if (with_objective) set_objective(obj);
    if (primary_floor_obj) {
      std::vector<double> coef;
      double offset = 0.0;
      linearize(*primary_floor_obj, coef, offset);
      std::vector<LinearTerm> terms;
      for (int j = 0; j < model.num_variables(); ++j)
        if (coef[j] != 0.0) terms.push_back({j, coef[j]});
      model.add_constraint(std::move(terms), Sense::kGreaterEqual, primary_floor - offset);
    }
  }

  static bool needs_window_count(const LinearObjective& obj, const LinearObjective* other) {
    auto any_b = [](const LinearObjective& o) {
      return std::any_of(o.b.begin(), o.b.end(), [](double v) { return v != 0.0; });
    };
    return any_b(obj) || (other && any_b(*other));
  }

  void linearize(const LinearObjective& obj, std::vector<double>& coef, double& offset) const {
    coef.assign(model.num_variables(), 0.0);
    offset = 0.0;
    if (obj.empty()) return;
    for (int d = 0; d < D; ++d) {
      const double a = obj.a[d], b = obj.b[d], c = obj.c[d];
      for (int f = 0; f < H; ++f) offset += a * (p.capacity[d] - p.fixed[d][f]);
      offset += (c - b) * (p.capacity[d] - p.fixed[d][0]);
      for (size_t g = 0; g < groups.size(); ++g) {
        if (y[g][d] < 0) continue;
        int span = 0;
        for (int f = 1; f <= H; ++f) span += active(*groups[g], f);
        coef[y[g][d]] += -a * span - (c - b) * (active(*groups[g], 1) ? 1 : 0);
      }
      for (int f = 1; f < H; ++f)
        if (n[d][f] >= 0) coef[n[d][f]] += -b;
    }
  }

  void set_objective(const LinearObjective& obj) {
    std::vector<double> coef;
    double offset;
    linearize(obj, coef, offset);
    model.objective = coef;
    model.objective_offset = offset;
  }

  PlanSolution extract(const optim::IlpResult& r) const {
    PlanSolution s;
    s.feasible = r.status == optim::IlpStatus::kOptimal;
    s.nodes = r.nodes;
    if (!s.feasible) return s;
    s.placed.assign(p.groups.size(), std::vector<int>(D, 0));
    s.free.assign(D, std::vector<int>(H, 0));
    for (int d = 0; d < D; ++d)
      for (int f = 0; f < H; ++f) s.free[d][f] = p.capacity[d] - p.fixed[d][f];
    for (size_t g = 0; g < groups.size(); ++g) {
      const size_t original = static_cast<size_t>(groups[g] - p.groups.data());
      for (int d = 0; d < D; ++d) {
        const int v = y[g][d] >= 0 ? r.values[y[g][d]] : 0;
        s.placed[original][d] = v;
        for (int f = 1; f <= H; ++f)
          if (active(*groups[g], f)) s.free[d][f - 1] -= v;
      }
    }
    return s;
  }
};

double closed_form(const LinearObjective& obj, const std::vector<std::vector<int>>& free) {
  if (obj.empty()) return 0.0;
  std::vector<int> total, count, first;
  for (const auto& row : free) {
    int t = 0;
    for (int v : row) t += v;
    total.push_back(t);
    count.push_back(min_window_count(row));
    first.push_back(row.empty() ? 0 : row[0]);
  }
  return evaluate(obj, total, count, first);
}

}  // namespace

std::string PlanProblem::key() const {
  std::string k;
  put_int(k, horizon);
  put_int(k, feasibility_only);
  for (int q : capacity) put_int(k, q);
  for (const auto& row : fixed)
    for (int v : row) put_int(k, v);
  for (const auto& g : groups) {
    put_int(k, g.epoch);
    put_int(k, g.duration);
    for (int v : g.by_size) put_int(k, v);
  }
  put_int(k, -1);
  if (!feasibility_only) {
    put_objective(k, objective.primary);
    put_objective(k, objective.secondary);
    put(k, &objective.secondary_weight, sizeof(double));
  }
  return k;
}

PlanSolution solve_plan(const PlanProblem& p) {
  const int D = sizes_of(p);
  if (static_cast<int>(p.fixed.size()) != D) throw std::invalid_argument("plan: fixed has wrong shape");
  for (const auto& g : p.groups)
    if (static_cast<int>(g.by_size.size()) != D || g.epoch < 1 || g.epoch > p.horizon || g.duration < 1)
      throw std::invalid_argument("plan: malformed order group");

  Builder b(p);
  if (p.feasibility_only) {
    b.build(nullptr, 0.0, {}, false);
    if (b.trivially_infeasible) return {};
    return b.extract(optim::ilp_solve(b.model));
  }

  const SchemeObjective& obj = p.objective;
  optim::IlpResult r;
  if (obj.needs_two_stage()) {
    b.build(nullptr, 0.0, obj.primary, true);
    if (b.trivially_infeasible) return {};
    const optim::IlpResult first = optim::ilp_solve(b.model);
    if (first.status != optim::IlpStatus::kOptimal) return b.extract(first);
    // Primary values are integers; half a unit keeps every optimum feasible.
    b.build(&obj.primary, first.objective - 0.5, obj.secondary, true);
    r = optim::ilp_solve(b.model);
  } else {
    LinearObjective weighted = obj.primary;
    if (obj.secondary_weight > 0.0)
      for (size_t d = 0; d < weighted.a.size(); ++d) {
        weighted.a[d] += obj.secondary_weight * obj.secondary.a[d];
        weighted.b[d] += obj.secondary_weight * obj.secondary.b[d];
        weighted.c[d] += obj.secondary_weight * obj.secondary.c[d];
      }
    b.build(nullptr, 0.0, weighted, true);
    if (b.trivially_infeasible) return {};
    r = optim::ilp_solve(b.model);
  }
  PlanSolution s = b.extract(r);
  if (s.feasible) {
    s.objective = closed_form(obj.primary, s.free);
    if (obj.secondary_weight > 0.0) s.objective += obj.secondary_weight * closed_form(obj.secondary, s.free);
  }
  return s;
}

namespace {

struct Cache {
  std::unordered_map<std::string, PlanSolution> map;
  CacheStats stats;
};

Cache& cache() {
  thread_local Cache c;
  return c;
}

constexpr size_t kCacheLimit = 400000;

}  // namespace

const PlanSolution& solve_plan_cached(const PlanProblem& p) {
  Cache& c = cache();
  std::string k = p.key();
  auto it = c.map.find(k);
  if (it != c.map.end()) {
    ++c.stats.hits;
    return it->second;
  }
  ++c.stats.misses;
  if (c.map.size() >= kCacheLimit) c.map.clear();
  return c.map.emplace(std::move(k), solve_plan(p)).first->second;
}

CacheStats plan_cache_stats() { return cache().stats; }

void clear_plan_cache() {
  cache().map.clear();
  cache().stats = {};
}

}  // namespace locker::allocation
