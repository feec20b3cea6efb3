#pragma once

#include <string>
#include <vector>

#include "locker/allocation/windows.hpp"
#include "locker/config.hpp"

namespace locker::allocation {

enum class Scheme { kDL, kLD, kBU };

Scheme parse_scheme(const std::string& name);
const char* scheme_name(Scheme s);

// Deliberate defects for the self-test's mutation checks. Default = correct.
struct Mutations {
  int w_end_shift = 0;       // shifts the epoch of the window-end constraint
  double ub_w_override = 0;  // > 0 replaces the window-length upper bound
};

// Upper bounds of the size-first and length-first objectives over `horizon`.
double upper_bound_s(const ProblemConfig& cfg, int horizon);
double upper_bound_w(const ProblemConfig& cfg, int horizon);

// v[δ-1][λ-1] for λ = 1..horizon. DL and LD only.
std::vector<std::vector<double>> cfa_coefficients(Scheme scheme, const ProblemConfig& cfg,
                                                  int horizon, const Mutations& mut = {});
inline std::vector<std::vector<double>> cfa_coefficients(Scheme scheme, const ProblemConfig& cfg) {
  return cfa_coefficients(scheme, cfg, cfg.F);
}

// The window objective Σ v w, rewritten through two aggregates per size:
// S_δ = Σ_λ λ w_δλ (free compartment-epochs) and N_δ = Σ_λ w_δλ (windows),
// plus the next-epoch free capacity s_δ1 used by BU:
//   value = Σ_δ a_δ S_δ - b_δ N_δ + c_δ s_δ1.
struct LinearObjective {
  std::vector<double> a, b, c;
  bool empty() const;
};

struct SchemeObjective {
  LinearObjective primary;
  LinearObjective secondary;
  double secondary_weight = 0.0;  // 0 = no secondary objective

  // Weights this small are unsafe to fold into one objective; solve in two stages.
  bool needs_two_stage() const { return secondary_weight > 0.0 && secondary_weight < 1e-12; }
};

// Allocation objective (features = false) or the extended-horizon feature
// objective (features = true). BU features break ties by the DL objective.
SchemeObjective scheme_objective(Scheme scheme, const ProblemConfig& cfg, int horizon, bool features,
                                 const Mutations& mut = {});

double evaluate(const LinearObjective& obj, const std::vector<int>& total_free,
                const std::vector<int>& window_count, const std::vector<int>& free_first);

// Primary / secondary objective values of a window multiset (DL/LD), exact in
// integers: DL primary Σ δλw, secondary Σ (2λ-1)w; LD the other way round.
long primary_value(Scheme scheme, const WindowCounts& w);
long secondary_value(Scheme scheme, const WindowCounts& w);

}  // namespace locker::allocation
