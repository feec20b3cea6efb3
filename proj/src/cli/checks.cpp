#include "locker/cli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "locker/allocation/models.hpp"
#include "locker/allocation/plan.hpp"
#include "locker/allocation/solver.hpp"
#include "locker/oracles/plans.hpp"
#include "locker/oracles/solvers.hpp"
#include "locker/oracles/states.hpp"
#include "locker/policies/dlp.hpp"
#include "locker/stochastic.hpp"

namespace locker::checks {

using allocation::Mutations;
using allocation::Scheme;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failures; keeps the first message for the report.
struct Tally {
  long probes = 0;
  long failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++probes;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  template <class F>
  void expect_lazy(bool ok, F&& what) {
    ++probes;
    if (ok) return;
    if (failures++ == 0) first = what();
  }
};

CheckResult finish(const std::string& name, const Tally& t, Clock::time_point start, const std::string& extra = "") {
  CheckResult r;
  r.name = name;
  r.passed = t.failures == 0 && t.probes > 0;
  std::ostringstream os;
  os << t.probes << " probes";
  if (!extra.empty()) os << ", " << extra;
  if (t.failures) os << ", " << t.failures << " failed; first: " << t.first;
  if (t.probes == 0) os << " (nothing checked)";
  r.detail = os.str();
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// Runs `body`, turning exceptions into a failed verdict.
CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  const auto start = Clock::now();
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what(),
            std::chrono::duration<double>(Clock::now() - start).count()};
  }
}

Occupancy toy_L(const ProblemConfig& cfg, std::vector<std::vector<int>> rows) {
  Occupancy L = empty_occupancy(cfg);
  for (size_t d = 0; d < rows.size(); ++d)
    for (size_t h = 0; h < rows[d].size(); ++h) L(d, 0, h) = rows[d][h];
  return L;
}

std::string state_text(const Occupancy& L, const Orders& O) { return describe(L, O); }

}  // namespace

CheckResult worked_example() {
  return guarded("worked example", [] {
    const auto start = Clock::now();
    const ProblemConfig cfg = toy_config();
    Tally t;

    // S_k: small parcels with h = 1, 1, 2 ... stored as L(δ, h); a large parcel
    // due in four days; request i=6 is small with lead one.
    PreDecisionState sk{1, 7, toy_L(cfg, {{2, 1}, {1, 0}}), empty_orders(cfg), Request{1, 1, 1}};
    sk.O(1, 0, 3) = 1;
    t.expect(allocation::check_feasible(cfg, sk.L, sk.O, sk.request), "i=6 infeasible");
    t.expect(oracle::row_packing_feasible(cfg, sk.L, allocation::with_request(sk.O, sk.request)),
             "no explicit plan for i=6");

    // i=6 in a large compartment: pin the size in the verbatim feasibility model.
    {
      auto fm = allocation::feasibility_model(cfg, sk.L, allocation::with_request(sk.O, sk.request));
      fm.model.add_constraint({{fm.y(1, 0, 0), 1.0}}, optim::Sense::kGreaterEqual, 1.0);
      fm.model.feasibility_only = true;
      t.expect(optim::ilp_solve(fm.model).status == optim::IlpStatus::kOptimal, "i=6 not allocatable to large");
    }

    const PostDecisionState skx = apply_demand_control(cfg, sk, 1);
    Orders want = empty_orders(cfg);
    want(0, 0, 0) = 1;
    want(1, 0, 3) = 1;
    t.expect(skx.L == sk.L && skx.O == want && skx.slot == 7, "S_k^x differs");

    ExogenousInfo w8{1, 8, kNoArrival, empty_occupancy(cfg)};
    w8.pickups(0, 0, 1) = 1;
    w8.pickups(1, 0, 0) = 1;
    const PreDecisionState s8 = apply_exogenous(cfg, skx, w8);
    t.expect(s8.L == toy_L(cfg, {{2, 0}, {0, 0}}), "S at slot 8 differs");
    const PreDecisionState sk1 =
        apply_exogenous(cfg, apply_demand_control(cfg, s8, 0), {1, 9, Request{1, 1, 3}, empty_occupancy(cfg)});
    const PostDecisionState sk1x = apply_demand_control(cfg, sk1, 1);
    ExogenousInfo w10{1, 10, kNoArrival, empty_occupancy(cfg)};
    w10.pickups(0, 0, 0) = 1;
    const PreDecisionState sk2 = apply_exogenous(cfg, sk1x, w10);
    t.expect(sk2.L == toy_L(cfg, {{1, 0}, {0, 0}}), "S_{k+2} differs");

    // LD moves the small parcel i=6 into a large compartment
    const AllocationMatrix a = allocation::decide_allocation(cfg, sk2.L, sk2.O, Scheme::kLD);
    t.expect(a(0, 1, 0) == 1 && a.sum() == 1, "LD allocation of S_{k+2}");
    const PostDecisionState sk2x = apply_allocation(cfg, sk2, a);
    Orders after = empty_orders(cfg);
    after(0, 0, 1) = 1;
    after(1, 0, 2) = 1;
    t.expect(sk2x.day == 1 && sk2x.slot == 10, "S^x_{k+2} epoch");
    t.expect(sk2x.L == toy_L(cfg, {{0, 1}, {1, 0}}), "S^x_{k+2} occupancy");
    t.expect(sk2x.O == after, "S^x_{k+2} orders");

    // Window counts {(1,5)x1, (1,4)x2, (2,1)x1, (2,3)x1}: an explicit plan
    // has them, and the verbatim CFA model of S_k with i=6 admits them.
    oracle::RowGrid g(2);
    g[0] = {{true, true, false, false, false, false},
            {true, true, false, false, false, false},
            {true, false, false, false, false, false}};
    g[1] = {{true, true, false, true, true, true}, {true, true, true, false, false, false}};
    allocation::WindowCounts expect = allocation::empty_counts(2, 6);
    expect[0][4] = 1;
    expect[0][3] = 2;
    expect[1][0] = 1;
    expect[1][2] = 1;
    t.expect(allocation::count_windows_oracle(g) == expect, "explicit plan window counts");
    auto m = allocation::cfa_model(cfg, sk.L, allocation::with_request(sk.O, sk.request), Scheme::kDL);
    for (int d = 1; d <= 2; ++d)
      for (int l = 1; l <= cfg.F; ++l)
        m.model.add_constraint({{m.w[d - 1][l - 1], 1.0}}, optim::Sense::kEqual, expect[d - 1][l - 1]);
    m.model.feasibility_only = true;
    t.expect(optim::ilp_solve(m.model).status == optim::IlpStatus::kOptimal, "window counts not achievable");
    return finish("worked example", t, start);
  });
}

CheckResult feasibility_oracle(int states, std::uint64_t seed) {
  return guarded("feasibility oracle", [&] {
    const auto start = Clock::now();
    const ProblemConfig cfg = tiny_config();
    Tally t;
    long infeasible = 0;
    for (const auto& s : oracle::random_reachable_states(cfg, seed, states))
      for (const Request& r : request_types(cfg)) {
        const bool fast = allocation::check_feasible(cfg, s.L, s.O, r);
        const bool brute = oracle::row_packing_feasible(cfg, s.L, allocation::with_request(s.O, r));
        t.expect_lazy(fast == brute, [&] { return state_text(s.L, s.O); });
        infeasible += !brute;
      }
    return finish("feasibility oracle", t, start, std::to_string(states) + " states, " +
                                                      std::to_string(infeasible) + " infeasible");
  });
}

CheckResult monotonicity(int states, std::uint64_t seed) {
  return guarded("monotonicity", [&] {
    const auto start = Clock::now();
    const ProblemConfig cfg = main_config("1id");
    Tally t;
    for (const auto& s : oracle::random_reachable_states(cfg, seed, states)) {
      if (s.slot == cfg.T + 1) {
        t.expect(allocation::check_feasible(cfg, s.L, s.O), "unreachable allocation state");
        continue;
      }
      for (int c = 1; c <= cfg.C; ++c)
        for (int e = 1; e <= cfg.E; ++e)
          for (int big = 2; big <= cfg.D; ++big) {
            if (!allocation::check_feasible(cfg, s.L, s.O, Request{c, big, e})) continue;
            for (int d = 1; d < big; ++d)
              t.expect_lazy(allocation::check_feasible(cfg, s.L, s.O, Request{c, d, e}),
                            [&] { return state_text(s.L, s.O); });
          }
    }
    return finish("monotonicity", t, start, std::to_string(states) + " states");
  });
}

CheckResult lexicographic(int states, const Mutations& mut, std::uint64_t seed) {
  return guarded("lexicographic fidelity", [&] {
    const auto start = Clock::now();
    const ProblemConfig cfg = toy_config();
    Tally t;
    for (const auto& s : oracle::random_reachable_states(cfg, seed, states, true))
      for (Scheme scheme : {Scheme::kDL, Scheme::kLD}) {
        const auto sol = allocation::solve_cfa(cfg, s.L, s.O, scheme, mut);
        auto m = allocation::cfa_model(cfg, s.L, s.O, scheme, allocation::CfaObjective::kPrimary);
        const auto first = optim::ilp_solve(m.model);
        if (first.status != optim::IlpStatus::kOptimal) {
          t.expect(false, "two-stage solve infeasible");
          continue;
        }
        const long p_star = std::lround(first.objective);
        allocation::add_primary_floor(m, cfg, scheme, p_star);
        m.model.objective.assign(m.model.num_variables(), 0.0);
        for (int d = 1; d <= cfg.D; ++d)
          for (int l = 1; l <= cfg.F; ++l)
            m.model.objective[m.w[d - 1][l - 1]] = scheme == Scheme::kDL ? 2.0 * l - 1.0 : d * l;
        const auto second = optim::ilp_solve(m.model);
        const std::string tag = allocation::scheme_name(scheme);
        t.expect_lazy(allocation::primary_value(scheme, sol.windows) == p_star,
                      [&] { return tag + " primary, " + state_text(s.L, s.O); });
        t.expect_lazy(second.status == optim::IlpStatus::kOptimal &&
                          allocation::secondary_value(scheme, sol.windows) == std::lround(second.objective),
                      [&] { return tag + " secondary, " + state_text(s.L, s.O); });
      }
    return finish("lexicographic fidelity", t, start, std::to_string(states) + " allocation states");
  });
}

CheckResult window_dominance() {
  return guarded("window dominance", [] {
    const auto start = Clock::now();
    Tally t;
    for (int total = 2; total <= 8; ++total) {
      std::vector<int> parts;
      std::function<void(int, int)> rec = [&](int left, int max_part) {
        if (left == 0) {
          if (parts.size() < 2) return;
          int score = 0;
          for (int l : parts) score += 2 * l - 1;
          t.expect(2 * total - 1 > score, "split of " + std::to_string(total));
          return;
        }
        for (int p = std::min(left, max_part); p >= 1; --p) {
          parts.push_back(p);
          rec(left - p, p);
          parts.pop_back();
        }
      };
      rec(total, total);
    }
    return finish("window dominance", t, start);
  });
}

CheckResult windows(const Mutations& mut, std::uint64_t seed) {
  return guarded("window oracle", [&] {
    const auto start = Clock::now();
    Tally t;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 500; ++trial) {
      const int rows = 1 + static_cast<int>(rng() % 4), H = 1 + static_cast<int>(rng() % 7);
      oracle::RowGrid g(1, std::vector<std::vector<bool>>(rows, std::vector<bool>(H)));
      std::vector<int> free(H, 0);
      for (int r = 0; r < rows; ++r)
        for (int f = 0; f < H; ++f) {
          g[0][r][f] = rng() % 3 == 0;
          free[f] += !g[0][r][f];
        }
      const auto runs = allocation::count_windows_oracle(g);
      const auto lifo = allocation::count_windows({free});
      long n_runs = 0, n_lifo = 0, s_runs = 0, s_lifo = 0;
      for (int l = 1; l <= H; ++l) {
        n_runs += runs[0][l - 1];
        n_lifo += lifo[0][l - 1];
        s_runs += l * runs[0][l - 1];
        s_lifo += l * lifo[0][l - 1];
      }
      t.expect(s_lifo == s_runs && n_lifo <= n_runs && n_lifo == allocation::min_window_count(free),
               "LIFO cover, trial " + std::to_string(trial));
    }

    // The example plan's counts are a solution of the verbatim model.
    const ProblemConfig toy = toy_config();
    Occupancy L = toy_L(toy, {{2, 1}, {1, 0}});
    Orders O = empty_orders(toy);
    O(1, 0, 3) = 1;
    O(0, 0, 0) = 1;
    auto m = allocation::cfa_model(toy, L, O, Scheme::kDL, allocation::CfaObjective::kWeighted, mut);
    const std::vector<std::vector<int>> want{{0, 0, 0, 2, 1, 0}, {1, 0, 1, 0, 0, 0}};
    for (int d = 1; d <= 2; ++d)
      for (int l = 1; l <= toy.F; ++l)
        m.model.add_constraint({{m.w[d - 1][l - 1], 1.0}}, optim::Sense::kEqual, want[d - 1][l - 1]);
    m.model.feasibility_only = true;
    t.expect(optim::ilp_solve(m.model).status == optim::IlpStatus::kOptimal, "example counts");

    // Compact vs verbatim optima on reachable allocation states.
    for (const auto& s : oracle::random_reachable_states(toy, seed, 24, true))
      for (Scheme scheme : {Scheme::kDL, Scheme::kLD, Scheme::kBU}) {
        const auto sol = allocation::solve_cfa(toy, s.L, s.O, scheme);
        const auto vm = allocation::cfa_model(toy, s.L, s.O, scheme, allocation::CfaObjective::kWeighted, mut);
        const auto r = optim::ilp_solve(vm.model);
        t.expect_lazy(r.status == optim::IlpStatus::kOptimal && std::abs(r.objective - sol.objective) <= 1e-9,
                      [&] { return std::string(allocation::scheme_name(scheme)) + " optimum, " + state_text(s.L, s.O); });
      }
    return finish("window oracle", t, start);
  });
}

CheckResult ilp_oracle(int models, std::uint64_t seed) {
  return guarded("ILP vs enumeration", [&] {
    const auto start = Clock::now();
    Tally t;
    std::mt19937_64 rng(seed);
    long feasible = 0;
    for (int trial = 0; trial < models; ++trial) {
      const auto m = oracle::random_int_model(rng);
      const auto best = oracle::enumerate_box(m);
      feasible += best.feasible;
      for (bool lp : {true, false}) {
        const auto r = optim::ilp_solve(m, {lp, 0});
        bool ok = (r.status == optim::IlpStatus::kOptimal) == best.feasible;
        if (ok && best.feasible) ok = m.is_feasible(r.values) && r.objective == best.objective;
        t.expect(ok, "model " + std::to_string(trial) + (lp ? " (LP bounds)" : " (no LP)"));
      }
    }
    return finish("ILP vs enumeration", t, start, std::to_string(feasible) + " feasible models");
  });
}

CheckResult lp_oracle(int models, std::uint64_t seed) {
  return guarded("LP vs vertices", [&] {
    const auto start = Clock::now();
    Tally t;
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < models; ++trial) {
      const auto m = oracle::random_lp(rng);
      const auto ref = oracle::enumerate_vertices(m);
      const auto r = optim::lp_solve(m);
      bool ok = r.status == ref.status;
      if (ok && r.status == optim::LpStatus::kOptimal) {
        worst = std::max(worst, std::abs(r.objective - ref.objective));
        ok = std::abs(r.objective - ref.objective) <= 1e-8;
      }
      t.expect(ok, "model " + std::to_string(trial));
    }
    std::ostringstream os;
    os << "max gap " << worst;
    return finish("LP vs vertices", t, start, os.str());
  });
}

CheckResult qp_oracle(int problems, long pg_steps, std::uint64_t seed) {
  return guarded("QP KKT", [&] {
    const auto start = Clock::now();
    Tally t;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    double worst_kkt = 0.0, worst_gap = 0.0;
    for (int trial = 0; trial < problems; ++trial) {
      const int rows = 10, n = 4;
      optim::RidgeProblem p;
      p.design = Eigen::MatrixXd(rows, n);
      p.target = Eigen::VectorXd(rows);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < n; ++c) p.design(r, c) = z(rng);
        p.target(r) = 3.0 * z(rng);
      }
      p.gamma = 0.5 * trial;
      p.penalized = {false, true, true, true};
      // θ ≥ 0 and nondecreasing on columns 1..n-1
      p.constraint_matrix = Eigen::MatrixXd::Zero(2 * (n - 1) - 1, n);
      p.constraint_rhs = Eigen::VectorXd::Zero(2 * (n - 1) - 1);
      int row = 0;
      for (int j = 1; j < n; ++j) p.constraint_matrix(row++, j) = 1.0;
      for (int j = 2; j < n; ++j) {
        p.constraint_matrix(row, j) = 1.0;
        p.constraint_matrix(row++, j - 1) = -1.0;
      }
      const auto r = optim::qp_ridge_constrained(p);
      const Eigen::VectorXd pg = oracle::projected_gradient(p, pg_steps);
      const double gap = r.objective - optim::ridge_objective(p, pg);
      worst_kkt = std::max(worst_kkt, r.kkt_residual);
      worst_gap = std::max(worst_gap, std::abs(gap));
      t.expect(r.kkt_residual <= 1e-9, "KKT residual, problem " + std::to_string(trial));
      t.expect(std::abs(gap) <= 1e-6, "objective vs projected gradient, problem " + std::to_string(trial));
    }
    std::ostringstream os;
    os << "max KKT " << worst_kkt << ", max gap " << worst_gap;
    return finish("QP KKT", t, start, os.str());
  });
}

CheckResult stochastic_laws(long samples, std::uint64_t seed) {
  return guarded("stochastic laws", [&] {
    const auto start = Clock::now();
    Tally t;
    auto within = [&](double est, double p, double sd, const std::string& what) {
      t.expect_lazy(std::abs(est - p) <= 3 * sd + 1e-12, [&] {
        std::ostringstream os;
        os << what << ": " << est << " vs " << p << " (sd " << sd << ")";
        return os.str();
      });
    };
    // residual pickup law: unconditional draws kept if still present at (h, t)
    std::mt19937_64 rng(seed);
    for (const std::string setting : {"1id", "2pf", "3pu"}) {
      const ProblemConfig cfg = main_config(setting);
      for (int c = 1; c <= cfg.C; ++c)
        for (int h = 1; h <= cfg.B - 1; ++h)
          for (int ts : {1, 7, cfg.T, cfg.T + 1}) {
            const auto exact = residual_pickup_distribution(cfg, c, h, ts);
            std::vector<long> hits(cfg.B, 0);
            long kept = 0;
            while (kept < samples) {
              const PickupTime pt = realize_pickup(cfg, c, {uniform(rng), uniform(rng)});
              if (pt.b < h || (pt.b == h && pt.q <= ts)) continue;
              ++hits[pt.b - 1];
              ++kept;
            }
            for (int b = 1; b <= cfg.B; ++b) {
              const double p = exact[b - 1];
              within(double(hits[b - 1]) / kept, p, std::sqrt(p * (1 - p) / kept),
                     "residual " + setting + " c" + std::to_string(c) + " h" + std::to_string(h) + " t" +
                         std::to_string(ts) + " b" + std::to_string(b));
            }
          }
    }
    // p-bar (tracked parcel present on day φ) and p-hat (new parcel)
    for (const std::string setting : {"1id", "2pf", "3pu"}) {
      const ProblemConfig cfg = main_config(setting);
      std::mt19937_64 g(derive_seed(seed, {1}));
      for (int ts : {1, 9, cfg.T})
        for (int c = 1; c <= cfg.C; ++c)
          for (int h = 1; h <= cfg.B - 1; ++h) {
            const auto tab = policies::dlp_tables(cfg, ts, 4);
            const std::string at = setting + " c" + std::to_string(c) + " h" + std::to_string(h) + " t" +
                                   std::to_string(ts);
            std::vector<long> present(4, 0);
            long kept = 0;
            while (kept < samples) {
              const int b = 1 + sample_index(cfg.pickup[c - 1], uniform(g));
              const int q = 1 + static_cast<int>(uniform(g) * cfg.T);
              if (!(b > h || (b == h && q > ts))) continue;
              ++kept;
              for (int phi = 1; phi <= 4; ++phi) present[phi - 1] += b >= h + phi - 1;
            }
            for (int phi = 1; phi <= 4; ++phi) {
              const double p = tab.stay_locker(c - 1, h - 1, phi - 1);
              within(double(present[phi - 1]) / kept, p, std::sqrt(p * (1 - p) / kept), "p-bar " + at);
            }
          }
      // p-hat does not depend on t or h
      const auto tab = policies::dlp_tables(cfg, 1, 4);
      for (int c = 1; c <= cfg.C; ++c) {
        std::vector<long> on_day(4, 0);
        for (long k = 0; k < samples; ++k) {
          const int b = 1 + sample_index(cfg.pickup[c - 1], uniform(g));
          for (int phi = 1; phi <= 4; ++phi) on_day[phi - 1] += phi == 1 || b >= phi - 1;
        }
        for (int phi = 1; phi <= 4; ++phi) {
          const double p = tab.stay_new(c - 1, 0, phi - 1);
          within(double(on_day[phi - 1]) / samples, p, std::sqrt(p * (1 - p) / samples),
                 "p-hat " + setting + " c" + std::to_string(c));
        }
      }
    }
    // o-hat: expected orders due per (d, c, φ); arrivals are the same in every setting
    {
      const ProblemConfig cfg = main_config();
      const int H = 5, t_now = 7;
      const auto o = policies::dlp_expected_demand(cfg, t_now, H);
      std::mt19937_64 g(derive_seed(seed, {2}));
      Grid3<double> sum(cfg.D, cfg.C, H, 0.0), sq(cfg.D, cfg.C, H, 0.0);
      for (long rep = 0; rep < samples; ++rep) {
        Grid3<int> cnt(cfg.D, cfg.C, H, 0);
        for (int a = 1; a <= H; ++a)
          for (int ts = a == 1 ? t_now + 1 : 1; ts <= cfg.T; ++ts) {
            const Request r = sample_arrival(cfg, uniform(g));
            if (r.none() || a + r.e - 1 > H) continue;
            ++cnt(r.d - 1, r.c - 1, a + r.e - 2);
          }
        for (int d = 0; d < cfg.D; ++d)
          for (int c = 0; c < cfg.C; ++c)
            for (int f = 0; f < H; ++f) {
              sum(d, c, f) += cnt(d, c, f);
              sq(d, c, f) += double(cnt(d, c, f)) * cnt(d, c, f);
            }
      }
      for (int d = 0; d < cfg.D; ++d)
        for (int c = 0; c < cfg.C; ++c)
          for (int f = 0; f < H; ++f) {
            const double mean = sum(d, c, f) / samples;
            const double sd = std::sqrt(std::max(0.0, sq(d, c, f) / samples - mean * mean) / samples);
            within(mean, o(d, c, f), sd, "o-hat d" + std::to_string(d + 1) + " c" + std::to_string(c + 1));
          }
    }
    return finish("stochastic laws", t, start, std::to_string(samples) + " samples per cell");
  });
}

Latency measure_latency(int states, std::uint64_t seed) {
  const ProblemConfig cfg = main_config("3pu");
  std::vector<double> feas, alloc;
  auto ms = [](Clock::time_point a) { return std::chrono::duration<double, std::milli>(Clock::now() - a).count(); };
  for (const auto& s : oracle::random_reachable_states(cfg, seed, states)) {
    if (s.slot == cfg.T + 1) {
      allocation::clear_plan_cache();
      const auto t0 = Clock::now();
      allocation::solve_cfa(cfg, s.L, s.O, Scheme::kDL);
      alloc.push_back(ms(t0));
    } else if (!s.request.none()) {
      allocation::clear_plan_cache();
      const auto t0 = Clock::now();
      allocation::check_feasible(cfg, s.L, s.O, s.request);
      feas.push_back(ms(t0));
    }
  }
  // allocation states are rare in the mixed sample; top up with end-of-day states
  for (const auto& s : oracle::random_reachable_states(cfg, seed + 1, states / 2, true)) {
    allocation::clear_plan_cache();
    const auto t0 = Clock::now();
    allocation::solve_cfa(cfg, s.L, s.O, Scheme::kDL);
    alloc.push_back(ms(t0));
  }
  auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  return {median(feas), median(alloc)};
}

std::vector<CheckResult> selftest(const SelftestOptions& opt) {
  const bool q = opt.quick;
  return {worked_example(),
          feasibility_oracle(q ? 100 : 500),
          monotonicity(q ? 100 : 1000),
          lexicographic(q ? 30 : 100, opt.mut),
          window_dominance(),
          windows(opt.mut),
          ilp_oracle(q ? 200 : 1000),
          lp_oracle(q ? 100 : 400),
          qp_oracle(q ? 2 : 4, q ? 100000 : 1000000),
          stochastic_laws(q ? 20000 : 100000)};
}

}  // namespace locker::checks
