#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace locker {

// Dense 3-index tensor, 0-based. Equality and ordering are element-wise so a
// Grid3 can key a map.
template <typename T>
class Grid3 {
 public:
  Grid3() = default;
  Grid3(int n0, int n1, int n2, T fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), data_(static_cast<size_t>(n0) * n1 * n2, fill) {}

  T& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  T& at(int i, int j, int k) {
    check(i, j, k);
    return data_[index(i, j, k)];
  }
  const T& at(int i, int j, int k) const {
    check(i, j, k);
    return data_[index(i, j, k)];
  }

  int dim0() const { return n0_; }
  int dim1() const { return n1_; }
  int dim2() const { return n2_; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  T sum() const {
    T s{};
    for (const T& v : data_) s += v;
    return s;
  }

  friend bool operator==(const Grid3& a, const Grid3& b) {
    return a.n0_ == b.n0_ && a.n1_ == b.n1_ && a.n2_ == b.n2_ && a.data_ == b.data_;
  }
  friend bool operator<(const Grid3& a, const Grid3& b) { return a.data_ < b.data_; }

 private:
  size_t index(int i, int j, int k) const {
    return (static_cast<size_t>(i) * n1_ + j) * n2_ + k;
  }
  void check(int i, int j, int k) const {
    if (i < 0 || i >= n0_ || j < 0 || j >= n1_ || k < 0 || k >= n2_)
      throw std::out_of_range("Grid3 index out of range");
  }

  int n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<T> data_;
};

}  // namespace locker
