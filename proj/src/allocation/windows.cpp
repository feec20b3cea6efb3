#include "locker/allocation/windows.hpp"

#include <stdexcept>

namespace locker::allocation {

WindowCounts empty_counts(int sizes, int horizon) {
  return WindowCounts(sizes, std::vector<int>(horizon, 0));
}

std::vector<Window> lifo_windows(const std::vector<int>& free, int delta) {
  const int horizon = static_cast<int>(free.size());
  std::vector<int> open;  // start epochs, most recent last
  std::vector<Window> out;
  int prev = 0;
  for (int f = 1; f <= horizon; ++f) {
    const int now = free[f - 1];
    if (now < 0) throw std::invalid_argument("negative free capacity");
    for (int k = prev; k < now; ++k) open.push_back(f);
    for (int k = now; k < prev; ++k) {
      out.push_back({delta, open.back(), f - open.back()});
      open.pop_back();
    }
    prev = now;
  }
  while (!open.empty()) {
    out.push_back({delta, open.back(), horizon + 1 - open.back()});
    open.pop_back();
  }
  return out;
}

WindowCounts count_windows(const std::vector<std::vector<int>>& free_by_size) {
  const int sizes = static_cast<int>(free_by_size.size());
  const int horizon = sizes ? static_cast<int>(free_by_size[0].size()) : 0;
  WindowCounts counts = empty_counts(sizes, horizon);
  for (int d = 0; d < sizes; ++d)
    for (const Window& w : lifo_windows(free_by_size[d], d + 1)) ++counts[d][w.length - 1];
  return counts;
}

WindowCounts count_windows_oracle(const std::vector<std::vector<std::vector<bool>>>& grid) {
  const int sizes = static_cast<int>(grid.size());
  int horizon = 0;
  for (const auto& rows : grid)
    for (const auto& row : rows) horizon = static_cast<int>(row.size());
  WindowCounts counts = empty_counts(sizes, horizon);
  for (int d = 0; d < sizes; ++d)
    for (const auto& row : grid[d]) {
      int run = 0;
      for (size_t f = 0; f <= row.size(); ++f) {
        if (f < row.size() && !row[f]) {
          ++run;
        } else if (run > 0) {
          ++counts[d][run - 1];
          run = 0;
        }
      }
    }
  return counts;
}

int min_window_count(const std::vector<int>& free) {
  int n = 0, prev = 0;
  for (int v : free) {
    if (v > prev) n += v - prev;
    prev = v;
  }
  return n;
}

}  // namespace locker::allocation
