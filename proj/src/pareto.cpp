// SPDX-License-Identifier: Apache-2.0
#include "hjsort/pareto.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hjsort/error.hpp"

namespace hjsort {

PointCloud::PointCloud(int n, std::vector<double> coords) : n_(n), coords_(std::move(coords)) {
  if (n < 1 || n > kMaxDim) throw Error(ErrorCode::kInvalidArgument, "point dimension out of range");
  if (coords_.size() % static_cast<std::size_t>(n) != 0)
    throw Error(ErrorCode::kInvalidArgument, "coordinate count is not a multiple of the dimension");
  for (double c : coords_)
    if (!std::isfinite(c)) throw Error(ErrorCode::kDomain, "point coordinates must be finite");
}

PointCloud PointCloud::normalized() const {
  std::vector<double> out(coords_);
  const std::size_t n = static_cast<std::size_t>(n_);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < size(); ++i) {
      lo = std::min(lo, coords_[i * n + j]);
      hi = std::max(hi, coords_[i * n + j]);
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < size(); ++i) {
      double& c = out[i * n + j];
      c = span > 0.0 ? std::clamp((c - lo) / span, 0.0, 1.0) : 0.0;
    }
  }
  return PointCloud(n_, std::move(out));
}

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<double> coords;
  int n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream row(line);
    std::string cell;
    int cols = 0;
    while (std::getline(row, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t\r");
      const auto last = cell.find_last_not_of(" \t\r");
      const std::string token = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (token.empty() || used != token.size() || !std::isfinite(v))
        throw Error(ErrorCode::kParse, path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
      coords.push_back(v);
      ++cols;
    }
    if (n == 0) n = cols;
    if (cols != n) {
      throw Error(ErrorCode::kParse, path + ":" + std::to_string(line_no) + ": expected " + std::to_string(n) +
                                         " columns, found " + std::to_string(cols));
    }
  }
  if (coords.empty()) throw Error(ErrorCode::kParse, path + ": no points in input");
  if (n > kMaxDim) throw Error(ErrorCode::kParse, path + ": too many columns");
  return PointCloud(n, std::move(coords));
}

bool dominates(std::span<const double> p, std::span<const double> q) {
  bool differs = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > q[i]) return false;
    if (p[i] < q[i]) differs = true;
  }
  return differs;
}

namespace {

std::vector<std::size_t> lexicographic_order(const PointCloud& cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto pa = cloud.point(a);
    const auto pb = cloud.point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  return order;
}

// First index k in [0, count) with dominated(k) false; dominated is true on a prefix.
template <typename Pred>
std::size_t first_free(std::size_t count, Pred&& dominated) {
  std::size_t lo = 0;
  std::size_t hi = count;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (dominated(mid))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

std::vector<std::int64_t> pareto_fronts_generic(const PointCloud& cloud) {
  std::vector<std::int64_t> labels(cloud.size(), 0);
  std::vector<std::vector<std::size_t>> fronts;
  // Dominators precede q in lexicographic order, so the front of q is final
  // when it is placed.
  for (std::size_t q : lexicographic_order(cloud)) {
    const auto pq = cloud.point(q);
    const std::size_t k = first_free(fronts.size(), [&](std::size_t f) {
      const auto& members = fronts[f];
      return std::any_of(members.rbegin(), members.rend(),
                         [&](std::size_t p) { return dominates(cloud.point(p), pq); });
    });
    if (k == fronts.size()) fronts.emplace_back();
    fronts[k].push_back(q);
    labels[q] = static_cast<std::int64_t>(k) + 1;
  }
  return labels;
}

std::vector<std::int64_t> pareto_fronts_2d(const PointCloud& cloud) {
  if (cloud.dim() != 2) throw Error(ErrorCode::kInvalidArgument, "2-D front path needs n = 2");
  std::vector<std::int64_t> labels(cloud.size(), 0);
  // Last point added to each front: the one with the largest x1 and smallest x2.
  std::vector<std::array<double, 2>> tails;
  for (std::size_t q : lexicographic_order(cloud)) {
    const auto pq = cloud.point(q);
    const std::size_t k = first_free(tails.size(), [&](std::size_t f) {
      const auto& t = tails[f];
      return t[1] <= pq[1] && !(t[0] == pq[0] && t[1] == pq[1]);
    });
    if (k == tails.size())
      tails.push_back({pq[0], pq[1]});
    else
      tails[k] = {pq[0], pq[1]};
    labels[q] = static_cast<std::int64_t>(k) + 1;
  }
  return labels;
}

std::vector<std::int64_t> pareto_fronts(const PointCloud& cloud) {
  return cloud.dim() == 2 ? pareto_fronts_2d(cloud) : pareto_fronts_generic(cloud);
}

double interpolate(const GridField& field, std::span<const double> x) {
  const GridSpec& spec = field.spec();
  const int n = spec.dim();
  if (static_cast<int>(x.size()) != n) throw Error(ErrorCode::kInvalidArgument, "point dimension mismatch");
  const auto m = static_cast<double>(spec.m());
  std::array<std::int64_t, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (int j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    double s = x[k] * m;
    const double nearest = std::round(s);
    if (std::abs(s - nearest) <= 1e-12 * std::max(1.0, nearest)) s = nearest;
    const auto i0 = std::min(static_cast<std::int64_t>(std::floor(s)), spec.m() - 1);
    base[k] = i0;
    frac[k] = s - static_cast<double>(i0);
  }
  const auto offsets = backward_offsets(spec);
  std::int64_t origin = 0;
  for (int j = 0; j < n; ++j) origin += base[static_cast<std::size_t>(j)] * offsets[static_cast<std::size_t>(j)];
  double value = 0.0;
  for (unsigned corner = 0; corner < (1u << n); ++corner) {
    double weight = 1.0;
    std::int64_t linear = origin;
    for (int j = 0; j < n; ++j) {
      const auto k = static_cast<std::size_t>(j);
      if (corner & (1u << j)) {
        weight *= frac[k];
        linear += offsets[k];
      } else {
        weight *= 1.0 - frac[k];
      }
    }
    if (weight != 0.0) value += weight * field[linear];
  }
  return value;
}

std::vector<double> pde_rank(const PointCloud& cloud, const GridField& u_field) {
  if (cloud.dim() != u_field.spec().dim())
    throw Error(ErrorCode::kInvalidArgument, "cloud dimension does not match the field");
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    if (std::any_of(p.begin(), p.end(), [](double c) { return c < 0.0 || c > 1.0; })) outside.push_back(i);
  }
  if (!outside.empty()) {
    std::ostringstream msg;
    msg << outside.size() << " point(s) outside [0,1]^n, indices:";
    for (std::size_t k = 0; k < std::min<std::size_t>(outside.size(), 20); ++k) msg << ' ' << outside[k];
    if (outside.size() > 20) msg << " ...";
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
  std::vector<double> ranks(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) ranks[i] = interpolate(u_field, cloud.point(i));
  return ranks;
}

double rank_agreement(std::span<const std::int64_t> fronts, std::span<const double> ranks) {
  if (fronts.size() != ranks.size()) throw Error(ErrorCode::kInvalidArgument, "fronts and ranks differ in length");
  if (fronts.size() < 2) throw Error(ErrorCode::kInvalidArgument, "rank agreement needs at least two points");
  double matched = 0.0;
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    for (std::size_t j = i + 1; j < fronts.size(); ++j) {
      if (fronts[i] == fronts[j]) continue;
      ++pairs;
      const bool front_less = fronts[i] < fronts[j];
      if (ranks[i] == ranks[j])
        matched += 0.5;
      else if ((ranks[i] < ranks[j]) == front_less)
        matched += 1.0;
    }
  }
  if (pairs == 0) throw Error(ErrorCode::kInvalidArgument, "rank agreement undefined: all points share one front");
  return matched / static_cast<double>(pairs);
}

void write_cloud_csv(const PointCloud& cloud, std::span<const std::int64_t> fronts, std::span<const double> ranks,
                     const std::string& path) {
  if (fronts.size() != cloud.size() || (!ranks.empty() && ranks.size() != cloud.size()))
    throw Error(ErrorCode::kInvalidArgument, "label columns do not match the cloud size");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.precision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (double c : cloud.point(i)) out << c << ',';
    out << fronts[i];
    if (!ranks.empty()) out << ',' << ranks[i];
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

}  // namespace hjsort
