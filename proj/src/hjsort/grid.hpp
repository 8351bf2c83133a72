// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace hjsort {

inline constexpr int kMaxDim = 8;

// Uniform grid over [0,1]^n with m subdivisions per axis; h = 1/m.
class GridSpec {
 public:
  GridSpec(int n, std::int64_t m);

  int dim() const noexcept { return n_; }
  std::int64_t m() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / static_cast<double>(m_); }
  std::int64_t nodes_per_axis() const noexcept { return m_ + 1; }
  std::int64_t node_count() const noexcept { return node_count_; }

  // Coordinate of node index i along any axis.
  double coordinate(std::int64_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(m_);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
  std::int64_t m_;
  std::int64_t node_count_;
};

struct MultiIndex {
  std::array<std::int64_t, kMaxDim> i{};
  int n = 0;

  std::int64_t& operator[](int j) { return i[static_cast<std::size_t>(j)]; }
  std::int64_t operator[](int j) const { return i[static_cast<std::size_t>(j)]; }
  std::span<const std::int64_t> view() const { return {i.data(), static_cast<std::size_t>(n)}; }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    if (a.n != b.n) return false;
    for (int j = 0; j < a.n; ++j)
      if (a[j] != b[j]) return false;
    return true;
  }
};

// Last axis fastest.
std::int64_t linear_index(const GridSpec& spec, const MultiIndex& idx);
MultiIndex multi_index(const GridSpec& spec, std::int64_t linear);

// Offset for axis j is (m+1)^(n-1-j); subtracting it gives the node x - h e_j.
std::vector<std::int64_t> backward_offsets(const GridSpec& spec);

// True when some coordinate is zero.
bool on_boundary(const MultiIndex& idx);

// Lexicographic enumeration of all nodes. Every node comes after each of its
// backward neighbours.
class SweepOrder {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = MultiIndex;
    using difference_type = std::ptrdiff_t;
    using pointer = const MultiIndex*;
    using reference = const MultiIndex&;

    iterator() = default;
    iterator(std::int64_t last, std::int64_t remaining, int n);

    reference operator*() const { return idx_; }
    pointer operator->() const { return &idx_; }
    iterator& operator++();
    iterator operator++(int) {
      auto tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.remaining_ == b.remaining_; }

   private:
    MultiIndex idx_{};
    std::int64_t last_ = 0;
    std::int64_t remaining_ = 0;
  };

  explicit SweepOrder(const GridSpec& spec) : spec_(spec) {}
  iterator begin() const { return {spec_.m(), spec_.node_count(), spec_.dim()}; }
  iterator end() const { return {spec_.m(), 0, spec_.dim()}; }

 private:
  GridSpec spec_;
};

inline SweepOrder sweep_order(const GridSpec& spec) { return SweepOrder(spec); }

// Advances idx to the next node in sweep order. Returns false after the last node.
bool advance(MultiIndex& idx, std::int64_t m);

class GridField {
 public:
  explicit GridField(GridSpec spec, double fill = 0.0);
  GridField(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double& operator[](std::int64_t linear) { return values_[static_cast<std::size_t>(linear)]; }
  double operator[](std::int64_t linear) const { return values_[static_cast<std::size_t>(linear)]; }
  double& at(const MultiIndex& idx) { return (*this)[linear_index(spec_, idx)]; }
  double at(const MultiIndex& idx) const { return (*this)[linear_index(spec_, idx)]; }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

// Ring buffer holding the most recent (m+1)^(n-1) + 1 node values of a sweep.
class RollingWindow {
 public:
  explicit RollingWindow(const GridSpec& spec);

  std::int64_t capacity() const noexcept { return static_cast<std::int64_t>(values_.size()); }
  double& slot(std::int64_t linear) { return values_[static_cast<std::size_t>(linear % capacity())]; }
  double slot(std::int64_t linear) const { return values_[static_cast<std::size_t>(linear % capacity())]; }

 private:
  std::vector<double> values_;
};

// Fields on disk. Binary: int64 n, int64 m (little endian), then (m+1)^n
// doubles in sweep order. CSV: one row per node, coordinates then value.
void write_field_binary(const GridField& field, const std::string& path);
GridField read_field_binary(const std::string& path);
void write_field_csv(const GridField& field, const std::string& path);

}  // namespace hjsort
