#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "locker/allocation/cfa.hpp"
#include "locker/allocation/plan.hpp"
#include "locker/optim/ilp.hpp"
#include "locker/state.hpp"

namespace locker::vfa {

// φ = (1, ŵ_11 .. ŵ_1F̂, ..., ŵ_D1 .. ŵ_DF̂) with F̂ = F + B - 1.
using FeatureVector = Eigen::VectorXd;

inline int feature_index(const ProblemConfig& cfg, int delta, int lambda) {
  return 1 + (delta - 1) * cfg.horizon_extended() + (lambda - 1);
}

// One scenario of sampled pickup days β: how many tracked parcels of cell
// (δ, c, h) leave β days after their allocation, and likewise for pending
// orders (d, c, f).
struct SampledPickups {
  int D = 0, C = 0, B = 0, F = 0;
  std::vector<int> l;  // [δ][c][h][β]
  std::vector<int> o;  // [d][c][f][β]

  SampledPickups() = default;
  explicit SampledPickups(const ProblemConfig& cfg);
  int& L(int delta, int c, int h, int beta) { return l[((delta - 1) * C + c - 1) * (B - 1) * B + (h - 1) * B + beta - 1]; }
  int L(int delta, int c, int h, int beta) const { return const_cast<SampledPickups*>(this)->L(delta, c, h, beta); }
  int& O(int d, int c, int f, int beta) { return o[((d - 1) * C + c - 1) * F * B + (f - 1) * B + beta - 1]; }
  int O(int d, int c, int f, int beta) const { return const_cast<SampledPickups*>(this)->O(d, c, f, beta); }
};

// Slot used for the residual law of a post-decision state: after the
// allocation the next day lies entirely ahead (t = 0).
int residual_slot(const ProblemConfig& cfg, const PostDecisionState& sx);

// Scenario u. Every parcel draws from its own counter-keyed uniform, so two
// states differing by one order share all other draws.
SampledPickups sample_pickups(const ProblemConfig& cfg, const PostDecisionState& sx, std::uint64_t seed, int u);

// Compact tentative plan over the extended horizon for one scenario.
allocation::PlanProblem feature_problem(const ProblemConfig& cfg, const SampledPickups& sp,
                                        allocation::Scheme scheme);

struct FeatureModel {
  optim::IntModel model;
  std::vector<std::vector<int>> s;  // [δ-1][f-1]
  std::vector<std::vector<int>> w;  // [δ-1][λ-1]
};

// The per-customer, per-β model written out constraint by constraint.
FeatureModel feature_model(const ProblemConfig& cfg, const SampledPickups& sp, allocation::Scheme scheme);

// Window counts of the optimal plan of one scenario.
allocation::WindowCounts scenario_windows(const ProblemConfig& cfg, const SampledPickups& sp,
                                          allocation::Scheme scheme);

FeatureVector compute_features(const ProblemConfig& cfg, const PostDecisionState& sx, int U, std::uint64_t seed,
                               allocation::Scheme scheme);

double value_estimate(const FeatureVector& phi, const Eigen::VectorXd& theta);

}  // namespace locker::vfa
