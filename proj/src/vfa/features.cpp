#include "locker/vfa/features.hpp"

#include <stdexcept>
#include <string>

#include "locker/allocation/windows.hpp"
#include "locker/stochastic.hpp"

namespace locker::vfa {

using allocation::Scheme;
using optim::LinearTerm;
using optim::Sense;

SampledPickups::SampledPickups(const ProblemConfig& cfg)
    : D(cfg.D), C(cfg.C), B(cfg.B), F(cfg.F),
      l(static_cast<size_t>(cfg.D) * cfg.C * (cfg.B - 1) * cfg.B, 0),
      o(static_cast<size_t>(cfg.D) * cfg.C * cfg.F * cfg.B, 0) {}

int residual_slot(const ProblemConfig& cfg, const PostDecisionState& sx) {
  return sx.slot == cfg.T + 1 ? 0 : sx.slot;
}

SampledPickups sample_pickups(const ProblemConfig& cfg, const PostDecisionState& sx, std::uint64_t seed, int u) {
  SampledPickups sp(cfg);
  const int t = residual_slot(cfg, sx);
  const auto uu = static_cast<std::uint64_t>(u);
  for (int delta = 1; delta <= cfg.D; ++delta)
    for (int c = 1; c <= cfg.C; ++c)
      for (int h = 1; h <= cfg.B - 1; ++h) {
        const int n = sx.L(delta - 1, c - 1, h - 1);
        if (n == 0) continue;
        const auto law = residual_pickup_distribution(cfg, c, h, t);
        for (int k = 0; k < n; ++k) {
          const double x = hashed_uniform(seed, {uu, 0, std::uint64_t(delta), std::uint64_t(c), std::uint64_t(h),
                                                 std::uint64_t(k)});
          ++sp.L(delta, c, h, 1 + sample_index(law, x));
        }
      }
  for (int d = 1; d <= cfg.D; ++d)
    for (int c = 1; c <= cfg.C; ++c)
      for (int f = 1; f <= cfg.F; ++f)
        for (int k = 0; k < sx.O(d - 1, c - 1, f - 1); ++k) {
          const double x = hashed_uniform(seed, {uu, 1, std::uint64_t(d), std::uint64_t(c), std::uint64_t(f),
                                                 std::uint64_t(k)});
          ++sp.O(d, c, f, 1 + sample_index(cfg.pickup[c - 1], x));
        }
  return sp;
}

allocation::PlanProblem feature_problem(const ProblemConfig& cfg, const SampledPickups& sp, Scheme scheme) {
  const int H = cfg.horizon_extended();
  allocation::PlanProblem p;
  p.horizon = H;
  p.capacity = cfg.Q;
  p.fixed.assign(cfg.D, std::vector<int>(H, 0));
  for (int delta = 1; delta <= cfg.D; ++delta)
    for (int c = 1; c <= cfg.C; ++c)
      for (int h = 1; h <= cfg.B - 1; ++h)
        for (int beta = h; beta <= cfg.B; ++beta)
          for (int f = 1; f <= beta - h && f <= H; ++f) p.fixed[delta - 1][f - 1] += sp.L(delta, c, h, beta);
  for (int f = 1; f <= cfg.F; ++f)
    for (int beta = 1; beta <= cfg.B; ++beta) {
      allocation::OrderGroup g{f, beta, std::vector<int>(cfg.D, 0)};
      for (int d = 1; d <= cfg.D; ++d)
        for (int c = 1; c <= cfg.C; ++c) g.by_size[d - 1] += sp.O(d, c, f, beta);
      p.groups.push_back(std::move(g));
    }
  p.feasibility_only = false;
  p.objective = allocation::scheme_objective(scheme, cfg, H, true);
  return p;
}

namespace {

std::string idx(const char* base, std::initializer_list<int> ks) {
  std::string s = base;
  for (int k : ks) s += "_" + std::to_string(k);
  return s;
}

}  // namespace

FeatureModel feature_model(const ProblemConfig& cfg, const SampledPickups& sp, Scheme scheme) {
  const int D = cfg.D, C = cfg.C, F = cfg.F, B = cfg.B, H = cfg.horizon_extended();
  if (F < B - 1) throw std::invalid_argument("feature model needs F >= B - 1");
  FeatureModel fm;
  auto& m = fm.model;
  // y(δ, c, f, β)
  std::vector<int> y(static_cast<size_t>(D) * C * F * B);
  auto Y = [&](int delta, int c, int f, int beta) -> int& {
    return y[((static_cast<size_t>(delta - 1) * C + c - 1) * F + f - 1) * B + beta - 1];
  };
  for (int delta = 1; delta <= D; ++delta)
    for (int c = 1; c <= C; ++c)
      for (int f = 1; f <= F; ++f)
        for (int beta = 1; beta <= B; ++beta)
          Y(delta, c, f, beta) = m.add_variable(0, cfg.capacity(delta), 0.0, idx("y", {delta, c, f, beta}));
  fm.s.assign(D, std::vector<int>(H));
  fm.w.assign(D, std::vector<int>(H));
  Grid3<int> wf(D, H, H, -1);  // (δ-1, λ-1, f-1)
  for (int delta = 1; delta <= D; ++delta) {
    for (int f = 1; f <= H; ++f) fm.s[delta - 1][f - 1] = m.add_variable(0, cfg.capacity(delta), 0.0, idx("s", {delta, f}));
    for (int f = 1; f <= H; ++f)
      for (int l = 1; l <= H - f + 1; ++l)
        wf(delta - 1, l - 1, f - 1) = m.add_variable(0, cfg.capacity(delta), 0.0, idx("wf", {delta, l, f}));
    for (int l = 1; l <= H; ++l)
      fm.w[delta - 1][l - 1] = m.add_variable(0, cfg.capacity(delta) * H, 0.0, idx("w", {delta, l}));
  }

  for (int delta = 1; delta <= D; ++delta) {
    const double Q = cfg.capacity(delta);
    for (int f = 1; f <= std::min(F, B - 1); ++f) {
      std::vector<LinearTerm> t;
      double fixed = 0;
      for (int c = 1; c <= C; ++c) {
        for (int j = 1; j <= f; ++j)
          for (int beta = f - j + 1; beta <= B; ++beta) t.push_back({Y(delta, c, j, beta), 1.0});
        for (int h = 1; h <= B - f; ++h)
          for (int beta = f + h; beta <= B; ++beta) fixed += sp.L(delta, c, h, beta);
      }
      t.push_back({fm.s[delta - 1][f - 1], 1.0});
      m.add_constraint(std::move(t), Sense::kEqual, Q - fixed, idx("cap1", {delta, f}));
    }
    for (int f = B; f <= F; ++f) {
      std::vector<LinearTerm> t;
      for (int c = 1; c <= C; ++c)
        for (int j = 0; j <= B - 1; ++j)
          for (int beta = j + 1; beta <= B; ++beta) t.push_back({Y(delta, c, f - j, beta), 1.0});
      t.push_back({fm.s[delta - 1][f - 1], 1.0});
      m.add_constraint(std::move(t), Sense::kEqual, Q, idx("cap2", {delta, f}));
    }
    for (int f = F + 1; f <= F + B - 1; ++f) {
      std::vector<LinearTerm> t;
      for (int c = 1; c <= C; ++c)
        for (int j = 0; j <= F + B - 1 - f; ++j)
          for (int beta = f - F + j + 1; beta <= B; ++beta) t.push_back({Y(delta, c, F - j, beta), 1.0});
      t.push_back({fm.s[delta - 1][f - 1], 1.0});
      m.add_constraint(std::move(t), Sense::kEqual, Q, idx("cap3", {delta, f}));
    }
  }
  for (int c = 1; c <= C; ++c)
    for (int f = 1; f <= F; ++f)
      for (int beta = 1; beta <= B; ++beta) {
        std::vector<LinearTerm> t;
        int eligible = 0;
        for (int delta = 1; delta <= D; ++delta) {
          t.push_back({Y(delta, c, f, beta), 1.0});
          eligible += sp.O(delta, c, f, beta);
          if (delta < D) m.add_constraint(t, Sense::kLessEqual, eligible, idx("order_mix", {delta, c, f, beta}));
        }
        m.add_constraint(std::move(t), Sense::kEqual, eligible, idx("all", {c, f, beta}));
      }
  std::vector<LinearTerm> to_end;
  for (int delta = 1; delta <= D; ++delta) {
    for (int f = 1; f <= H; ++f) {
      std::vector<LinearTerm> t;
      for (int j = 1; j <= f; ++j)
        for (int l = f - j + 1; l <= F + B - j; ++l) t.push_back({wf(delta - 1, l - 1, j - 1), 1.0});
      t.push_back({fm.s[delta - 1][f - 1], -1.0});
      m.add_constraint(std::move(t), Sense::kEqual, 0.0, idx("s_to_w", {delta, f}));
    }
    for (int f = 2; f <= F; ++f) {
      std::vector<LinearTerm> t;
      for (int j = 1; j <= f - 1; ++j) t.push_back({wf(delta - 1, j - 1, f - j - 1), 1.0});
      for (int c = 1; c <= C; ++c)
        for (int beta = 1; beta <= B; ++beta) t.push_back({Y(delta, c, f, beta), -1.0});
      m.add_constraint(std::move(t), Sense::kLessEqual, 0.0, idx("w_end", {delta, f}));
    }
    for (int l = 1; l <= H; ++l) {
      std::vector<LinearTerm> t{{fm.w[delta - 1][l - 1], 1.0}};
      for (int f = 1; f <= F + B - l; ++f) t.push_back({wf(delta - 1, l - 1, f - 1), -1.0});
      m.add_constraint(std::move(t), Sense::kEqual, 0.0, idx("wf_to_w", {delta, l}));
    }
    for (int f = F + 1; f <= F + B - 1; ++f)
      for (int j = 1; j <= f - 1; ++j) to_end.push_back({wf(delta - 1, j - 1, f - j - 1), 1.0});
  }
  m.add_constraint(std::move(to_end), Sense::kEqual, 0.0, "to_end");

  // Σ_δ a S - b N + c s_1 with S = Σ λ w, N = Σ w.
  const auto obj = allocation::scheme_objective(scheme, cfg, H, true);
  m.objective.assign(m.num_variables(), 0.0);
  auto add = [&](const allocation::LinearObjective& o, double scale) {
    if (o.empty()) return;
    for (int delta = 1; delta <= D; ++delta) {
      for (int l = 1; l <= H; ++l)
        m.objective[fm.w[delta - 1][l - 1]] += scale * (o.a[delta - 1] * l - o.b[delta - 1]);
      m.objective[fm.s[delta - 1][0]] += scale * o.c[delta - 1];
    }
  };
  add(obj.primary, 1.0);
  add(obj.secondary, obj.secondary_weight);
  return fm;
}

allocation::WindowCounts scenario_windows(const ProblemConfig& cfg, const SampledPickups& sp, Scheme scheme) {
  const auto& sol = allocation::solve_plan_cached(feature_problem(cfg, sp, scheme));
  if (!sol.feasible) throw std::logic_error("feature plan infeasible");
  return allocation::count_windows(sol.free);
}

FeatureVector compute_features(const ProblemConfig& cfg, const PostDecisionState& sx, int U, std::uint64_t seed,
                               Scheme scheme) {
  if (U < 1) throw std::invalid_argument("U must be positive");
  const int H = cfg.horizon_extended();
  FeatureVector phi = FeatureVector::Zero(cfg.feature_length());
  for (int u = 0; u < U; ++u) {
    const auto w = scenario_windows(cfg, sample_pickups(cfg, sx, seed, u), scheme);
    for (int delta = 1; delta <= cfg.D; ++delta)
      for (int l = 1; l <= H; ++l) phi(feature_index(cfg, delta, l)) += w[delta - 1][l - 1];
  }
  phi /= U;
  phi(0) = 1.0;
  return phi;
}

double value_estimate(const FeatureVector& phi, const Eigen::VectorXd& theta) { return theta.dot(phi); }

}  // namespace locker::vfa
