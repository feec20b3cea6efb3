#include "locker/policies/dlp.hpp"

#include <stdexcept>

#include "locker/stochastic.hpp"

namespace locker::policies {

using optim::LinearTerm;
using optim::Sense;

Grid3<double> dlp_expected_demand(const ProblemConfig& cfg, int t_now, int horizon) {
  Grid3<double> o(cfg.D, cfg.C, horizon, 0.0);
  for (int phi = 1; phi <= horizon; ++phi)
    for (int a = 1; a <= phi; ++a) {
      const int e = phi - a + 1;
      if (e > cfg.E) continue;
      const double slots = a == 1 ? cfg.T - t_now : cfg.T;
      for (int c = 1; c <= cfg.C; ++c)
        for (int d = 1; d <= cfg.D; ++d) o(d - 1, c - 1, phi - 1) += slots * cfg.request_prob(c, d, e);
    }
  return o;
}

DlpTables dlp_tables(const ProblemConfig& cfg, int t_now, int horizon) {
  if (horizon < 1) throw std::invalid_argument("DLP horizon must be positive");
  DlpTables tab;
  tab.horizon = horizon;
  tab.demand = dlp_expected_demand(cfg, t_now, horizon);
  tab.stay_locker = Grid3<double>(cfg.C, cfg.B - 1, horizon, 0.0);
  tab.stay_new = Grid3<double>(cfg.C, horizon, horizon, 0.0);
  for (int c = 1; c <= cfg.C; ++c) {
    for (int h = 1; h <= cfg.B - 1; ++h) {
      std::vector<double> law;
      try {
        law = residual_pickup_distribution(cfg, c, h, t_now);
      } catch (const std::domain_error&) {
        continue;  // nobody can be in this cell
      }
      for (int phi = 1; phi <= horizon; ++phi)
        for (int beta = h + phi - 1; beta <= cfg.B; ++beta) tab.stay_locker(c - 1, h - 1, phi - 1) += law[beta - 1];
    }
    for (int v = 1; v <= horizon; ++v)
      for (int phi = v; phi <= horizon; ++phi) {
        double p = phi == v ? 1.0 : 0.0;
        if (phi > v)
          for (int b = phi - v; b <= cfg.B; ++b) p += cfg.pickup_prob(c, b);
        tab.stay_new(c - 1, v - 1, phi - 1) = p;
      }
  }
  return tab;
}

optim::LpModel dlp_model(const ProblemConfig& cfg, const DlpTables& tab, const Occupancy& L, const Orders& O) {
  const int H = tab.horizon, D = cfg.D, C = cfg.C;
  optim::LpModel m;
  Grid3<int> y(D, C, H, -1);
  for (int delta = 1; delta <= D; ++delta)
    for (int c = 1; c <= C; ++c)
      for (int phi = 1; phi <= H; ++phi)
        y(delta - 1, c - 1, phi - 1) = m.add_variable(0.0, optim::kInfinity, cfg.weight(c),
                                                      "y_" + std::to_string(delta) + "_" + std::to_string(c) + "_" +
                                                          std::to_string(phi));
  for (int d = 1; d <= D; ++d)
    for (int c = 1; c <= C; ++c)
      for (int f = 1; f <= std::min(cfg.F, H); ++f) m.objective_offset -= cfg.weight(c) * O(d - 1, c - 1, f - 1);

  for (int delta = 1; delta <= D; ++delta)
    for (int phi = 1; phi <= H; ++phi) {
      std::vector<LinearTerm> t;
      double held = 0.0;
      for (int c = 1; c <= C; ++c) {
        for (int j = 1; j <= phi; ++j) t.push_back({y(delta - 1, c - 1, j - 1), tab.stay_new(c - 1, j - 1, phi - 1)});
        for (int h = 1; h <= cfg.B - 1; ++h) held += tab.stay_locker(c - 1, h - 1, phi - 1) * L(delta - 1, c - 1, h - 1);
      }
      m.add_constraint(std::move(t), Sense::kLessEqual, cfg.capacity(delta) - held, "cap");
    }
  for (int c = 1; c <= C; ++c)
    for (int phi = 1; phi <= H; ++phi) {
      std::vector<LinearTerm> t;
      double avail = 0.0;
      for (int delta = 1; delta <= D; ++delta) {
        t.push_back({y(delta - 1, c - 1, phi - 1), 1.0});
        avail += tab.demand(delta - 1, c - 1, phi - 1);
        if (phi <= cfg.F) avail += O(delta - 1, c - 1, phi - 1);
        m.add_constraint(t, Sense::kLessEqual, avail, "order_mix");
      }
      if (phi <= cfg.F) {
        double due = 0.0;
        for (int d = 1; d <= D; ++d) due += O(d - 1, c - 1, phi - 1);
        m.add_constraint(std::move(t), Sense::kGreaterEqual, due, "all");
      }
    }
  return m;
}

std::optional<double> dlp_value(const ProblemConfig& cfg, const DlpTables& tab, const Occupancy& L,
                                const Orders& O) {
  const auto m = dlp_model(cfg, tab, L, O);
  const auto r = optim::lp_solve(m);
  if (r.status == optim::LpStatus::kInfeasible) return std::nullopt;
  if (r.status != optim::LpStatus::kOptimal) throw std::logic_error("DLP unbounded");
  return r.objective;
}

int dlp_decide(const ProblemConfig& cfg, const PreDecisionState& s, int horizon) {
  if (s.request.none()) return 0;
  const DlpTables tab = dlp_tables(cfg, s.slot, horizon);
  Orders with = s.O;
  ++with(s.request.d - 1, s.request.c - 1, s.request.e - 1);
  const auto accept = dlp_value(cfg, tab, s.L, with);
  if (!accept) return 0;
  const auto reject = dlp_value(cfg, tab, s.L, s.O);
  if (!reject) return 1;
  // ties accept; the slack absorbs simplex round-off on exact ties
  return cfg.weight(s.request.c) + 1e-9 >= *reject - *accept ? 1 : 0;
}

}  // namespace locker::policies
