#pragma once

#include <optional>

#include "locker/grid.hpp"
#include "locker/optim/lp.hpp"
#include "locker/state.hpp"

namespace locker::policies {

// Certainty-equivalent tables over DLP days φ = 1..horizon (day 1 = today).
struct DlpTables {
  int horizon = 0;
  Grid3<double> demand;       // ô(d-1, c-1, φ-1)
  Grid3<double> stay_locker;  // p̄(c-1, h-1, φ-1): parcel with dwell h today is present on day φ
  Grid3<double> stay_new;     // p̂(c-1, ϑ-1, φ-1): parcel allocated on day ϑ is present on day φ
};

// Expected requests still to come, by delivery day; t_now slots of today are used up.
Grid3<double> dlp_expected_demand(const ProblemConfig& cfg, int t_now, int horizon);
DlpTables dlp_tables(const ProblemConfig& cfg, int t_now, int horizon);

// The LP for pending orders O_tilde; maximized.
optim::LpModel dlp_model(const ProblemConfig& cfg, const DlpTables& tab, const Occupancy& L, const Orders& O);

// Optimal value, or nothing when the instance is infeasible.
std::optional<double> dlp_value(const ProblemConfig& cfg, const DlpTables& tab, const Occupancy& L,
                                const Orders& O);

// Accept iff m_c >= Z(reject) - Z(accept). An infeasible accept instance
// rejects; an infeasible reject instance accepts.
int dlp_decide(const ProblemConfig& cfg, const PreDecisionState& s, int horizon);

}  // namespace locker::policies
