// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hjsort/grid.hpp"

namespace hjsort {

// N points in R^n, row-major.
class PointCloud {
 public:
  PointCloud(int n, std::vector<double> coords);

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(n_); }
  bool empty() const noexcept { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  // Per-axis affine map onto [0,1]; constant axes map to 0.
  PointCloud normalized() const;

 private:
  int n_;
  std::vector<double> coords_;
};

// One CSV row per point, all rows with the same number of columns. Blank
// lines are skipped. Parse failures report the 1-based line number.
PointCloud read_cloud_csv(const std::string& path);

// p dominates q when p_i <= q_i for all i and p != q.
bool dominates(std::span<const double> p, std::span<const double> q);

// Front index per point (1 = nondominated), by peeling minimal elements.
// n = 2 uses the sort-and-sweep path.
std::vector<std::int64_t> pareto_fronts(const PointCloud& cloud);
// Generic path for any n: lexicographic order plus binary search over fronts.
std::vector<std::int64_t> pareto_fronts_generic(const PointCloud& cloud);
std::vector<std::int64_t> pareto_fronts_2d(const PointCloud& cloud);

// Multilinear interpolation of a grid field at x in [0,1]^n.
double interpolate(const GridField& field, std::span<const double> x);

// Interpolated u value per point. Points outside [0,1]^n are rejected with
// their indices in the error message.
std::vector<double> pde_rank(const PointCloud& cloud, const GridField& u_field);

// Over pairs with distinct fronts, the fraction whose ranks are ordered the
// same way as their fronts; tied ranks count one half.
double rank_agreement(std::span<const std::int64_t> fronts, std::span<const double> ranks);

void write_cloud_csv(const PointCloud& cloud, std::span<const std::int64_t> fronts, std::span<const double> ranks,
                     const std::string& path);

}  // namespace hjsort
