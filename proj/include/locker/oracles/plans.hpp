#pragma once
// Explicit per-compartment plans: every parcel is placed in a concrete row
// and rows may not overlap. Exponential, for tiny instances only.

#include <functional>
#include <optional>
#include <vector>

#include "locker/allocation/windows.hpp"
#include "locker/state.hpp"

namespace locker::oracle {

struct Block {
  int size = 1;        // required size (exact when fixed, minimum otherwise)
  bool fixed = false;  // already in the locker: cannot move
  int start = 1;       // first occupied epoch
  int end = 1;         // last occupied epoch (inclusive, clipped to the horizon)
};

// Occupied[δ-1][row][f-1].
using RowGrid = std::vector<std::vector<std::vector<bool>>>;

// Worst-case blocks: a dwell-h parcel stays through epoch B-h, an order due
// at f holds its compartment for f..f+B-1.
inline std::vector<Block> worst_case_blocks(const ProblemConfig& cfg, const Occupancy& L, const Orders& O) {
  std::vector<Block> blocks;
  for (int delta = 1; delta <= cfg.D; ++delta)
    for (int c = 1; c <= cfg.C; ++c)
      for (int h = 1; h <= cfg.B - 1; ++h)
        for (int k = 0; k < L(delta - 1, c - 1, h - 1); ++k)
          if (cfg.B - h >= 1) blocks.push_back({delta, true, 1, std::min(cfg.F, cfg.B - h)});
  for (int d = cfg.D; d >= 1; --d)
    for (int c = 1; c <= cfg.C; ++c)
      for (int f = 1; f <= cfg.F; ++f)
        for (int k = 0; k < O(d - 1, c - 1, f - 1); ++k)
          blocks.push_back({d, false, f, std::min(cfg.F, f + cfg.B - 1)});
  return blocks;
}

// Calls visit(grid) for every row assignment of the blocks, up to row
// symmetry among still-empty rows. visit returns false to stop early.
inline void enumerate_row_packings(const std::vector<int>& Q, int horizon, const std::vector<Block>& blocks,
                                   const std::function<bool(const RowGrid&)>& visit) {
  const int D = static_cast<int>(Q.size());
  RowGrid grid(D);
  for (int d = 0; d < D; ++d) grid[d].assign(Q[d], std::vector<bool>(horizon, false));
  bool stop = false;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (stop) return;
    if (i == blocks.size()) {
      if (!visit(grid)) stop = true;
      return;
    }
    const Block& b = blocks[i];
    const int lo = b.size - 1, hi = b.fixed ? b.size - 1 : D - 1;
    for (int d = lo; d <= hi && !stop; ++d) {
      bool tried_empty = false;
      for (int r = 0; r < Q[d] && !stop; ++r) {
        auto& row = grid[d][r];
        bool empty = true, clash = false;
        for (int f = 0; f < horizon; ++f) {
          empty = empty && !row[f];
          if (f + 1 >= b.start && f + 1 <= b.end && row[f]) clash = true;
        }
        if (clash) continue;
        if (empty) {
          if (tried_empty) continue;
          tried_empty = true;
        }
        for (int f = b.start; f <= b.end; ++f) row[f - 1] = true;
        rec(i + 1);
        for (int f = b.start; f <= b.end; ++f) row[f - 1] = false;
      }
    }
  };
  rec(0);
}

inline bool row_packing_feasible(const ProblemConfig& cfg, const Occupancy& L, const Orders& O) {
  bool found = false;
  enumerate_row_packings(cfg.Q, cfg.F, worst_case_blocks(cfg, L, O), [&](const RowGrid&) {
    found = true;
    return false;
  });
  return found;
}

// Best value of score(windows, grid) over all explicit plans; nullopt if none.
inline std::optional<double> best_row_packing(
    const ProblemConfig& cfg, const Occupancy& L, const Orders& O,
    const std::function<double(const allocation::WindowCounts&, const RowGrid&)>& score) {
  std::optional<double> best;
  enumerate_row_packings(cfg.Q, cfg.F, worst_case_blocks(cfg, L, O), [&](const RowGrid& g) {
    const double v = score(allocation::count_windows_oracle(g), g);
    if (!best || v > *best) best = v;
    return true;
  });
  return best;
}

}  // namespace locker::oracle
