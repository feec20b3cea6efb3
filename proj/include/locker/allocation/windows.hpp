#pragma once

#include <vector>

namespace locker::allocation {

// A stretch of free capacity: `length` consecutive epochs from `start` (1-based)
// in one compartment of size `delta` (1-based).
struct Window {
  int delta = 1;
  int start = 1;
  int length = 1;
  friend bool operator==(const Window&, const Window&) = default;
};

// counts[δ-1][λ-1]
using WindowCounts = std::vector<std::vector<int>>;

WindowCounts empty_counts(int sizes, int horizon);

// Covers the free-capacity profile free[f-1] (f = 1..H) of one size with the
// fewest windows: every rise opens windows, every drop closes the most
// recently opened ones first. The number of windows is
// free[0] + Σ max(0, free[f] - free[f-1]), the minimum possible.
std::vector<Window> lifo_windows(const std::vector<int>& free, int delta);

WindowCounts count_windows(const std::vector<std::vector<int>>& free_by_size);

// Reference window count from an explicit plan: grid[δ-1][row][f-1] is true
// when that compartment is occupied. Returns maximal free runs per (δ, λ).
WindowCounts count_windows_oracle(const std::vector<std::vector<std::vector<bool>>>& grid);

// Minimum window count of a free profile (closed form used by the compact models).
int min_window_count(const std::vector<int>& free);

}  // namespace locker::allocation
