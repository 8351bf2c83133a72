// SPDX-License-Identifier: Apache-2.0
#include "hjsort/testcases.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

namespace hjsort {

namespace {

double coordinate_product(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 1.0, std::multiplies<>());
}

double nth_root(double v, int n) { return std::pow(v, 1.0 / n); }

double clamp_noise(double v) {
  if (v >= 0.0) return v;
  if (v >= -1e-12) return 0.0;
  throw Error(ErrorCode::kDomain, "negative value " + std::to_string(v) + " cannot be transformed");
}

}  // namespace

double f1(std::span<const double> x) { return *std::max_element(x.begin(), x.end()) > 0.5 ? 1.0 : 0.0; }

double u1(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = std::max(x[i] - 0.5, 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) p *= x[j];
    best = std::max(best, p);
  }
  return n * nth_root(best, n);
}

double f2(std::span<const double> x, double k) {
  const int n = static_cast<int>(x.size());
  double s = 0.0;
  for (double xj : x) s += std::sin(k * xj) * std::sin(k * xj);
  double p = 1.0;
  for (double xi : x) p *= s + n * k + n * k * xi * std::sin(2.0 * k * xi);
  return p / (std::pow(n, n) * std::pow(k + 1.0, n));
}

double u2(std::span<const double> x, double k) {
  const int n = static_cast<int>(x.size());
  double s = 0.0;
  for (double xj : x) s += std::sin(k * xj) * std::sin(k * xj);
  return nth_root(coordinate_product(x), n) * (s + n * k) / (k + 1.0);
}

double w3(std::span<const double> x, double big_c) {
  return big_c * *std::max_element(x.begin(), x.end()) + std::accumulate(x.begin(), x.end(), 0.0);
}

double f3(std::span<const double> x, double big_c) {
  const int n = static_cast<int>(x.size());
  std::array<double, kMaxDim> sorted{};
  std::copy(x.begin(), x.end(), sorted.begin());
  std::sort(sorted.begin(), sorted.begin() + n);
  const double w = w3(std::span<const double>(sorted.data(), static_cast<std::size_t>(n)), big_c);
  double p = w + n * (1.0 + big_c) * sorted[static_cast<std::size_t>(n - 1)];
  for (int i = 0; i + 1 < n; ++i) p *= w + n * sorted[static_cast<std::size_t>(i)];
  return p / std::pow(big_c + n, n);
}

double u3(std::span<const double> x, double big_c) {
  const int n = static_cast<int>(x.size());
  return n * nth_root(coordinate_product(x), n) * w3(x, big_c) / (big_c + n);
}

TestCase TestCase::f1() { return {CaseKind::kF1, 0.0}; }

TestCase TestCase::f2(double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidArgument, "f2 requires k > 0");
  return {CaseKind::kF2, k};
}

TestCase TestCase::f3(double big_c) {
  if (!(big_c >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "f3 requires C >= 0");
  return {CaseKind::kF3, big_c};
}

TestCase TestCase::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::kInvalidArgument, "constant right-hand side must be finite and >= 0");
  return {CaseKind::kConstant, c};
}

TestCase TestCase::parse(std::string_view name, double k, double big_c) {
  if (name == "f1") return f1();
  if (name == "f2") return f2(k);
  if (name == "f3") return f3(big_c);
  constexpr std::string_view prefix = "const:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string text(name.substr(prefix.size()));
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (text.empty() || used != text.size())
      throw Error(ErrorCode::kInvalidArgument, "cannot parse constant in '" + std::string(name) + "'");
    return constant(c);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown case '" + std::string(name) + "' (expected f1, f2, f3 or const:<c>)");
}

std::string TestCase::name() const {
  switch (kind_) {
    case CaseKind::kF1:
      return "f1";
    case CaseKind::kF2:
      return "f2";
    case CaseKind::kF3:
      return "f3";
    case CaseKind::kConstant: {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), param_);
      return "const:" + std::string(buf, end);
    }
  }
  return "?";
}

double TestCase::f(std::span<const double> x) const {
  switch (kind_) {
    case CaseKind::kF1:
      return hjsort::f1(x);
    case CaseKind::kF2:
      return hjsort::f2(x, param_);
    case CaseKind::kF3:
      return hjsort::f3(x, param_);
    case CaseKind::kConstant:
      return param_;
  }
  return 0.0;
}

double TestCase::u(std::span<const double> x) const {
  switch (kind_) {
    case CaseKind::kF1:
      return hjsort::u1(x);
    case CaseKind::kF2:
      return hjsort::u2(x, param_);
    case CaseKind::kF3:
      return hjsort::u3(x, param_);
    case CaseKind::kConstant: {
      const int n = static_cast<int>(x.size());
      return n * nth_root(param_ * coordinate_product(x), n);
    }
  }
  return 0.0;
}

RightHandSide TestCase::rhs() const {
  if (kind_ == CaseKind::kConstant) return RightHandSide::constant(param_);
  return RightHandSide::from_function([tc = *this](std::span<const double> x) { return tc.f(x); });
}

double u_from_v(double v, int n) { return n * nth_root(clamp_noise(v), n); }

double v_from_u(double u, int n) { return std::pow(clamp_noise(u) / n, n); }

double u_from_w(double w, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  return n * nth_root(coordinate_product(x), n) * clamp_noise(w);
}

double w_from_u(double u, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  const double p = coordinate_product(x);
  if (!(p > 0.0)) throw Error(ErrorCode::kDomain, "w is undefined on the boundary");
  return clamp_noise(u) / (n * nth_root(p, n));
}

double to_u_scale(SchemeKind kind, double value, std::span<const double> x) {
  switch (kind) {
    case SchemeKind::kS1:
      return value;
    case SchemeKind::kS2:
      return u_from_v(value, static_cast<int>(x.size()));
    case SchemeKind::kS3:
      return u_from_w(value, x);
  }
  return value;
}

GridField to_u_scale(SchemeKind kind, const GridField& field) {
  const GridSpec& spec = field.spec();
  GridField out(spec);
  std::array<double, kMaxDim> x{};
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(spec.dim()));
  std::int64_t linear = 0;
  for (const MultiIndex& idx : sweep_order(spec)) {
    for (int j = 0; j < spec.dim(); ++j) x[static_cast<std::size_t>(j)] = spec.coordinate(idx[j]);
    out[linear] = to_u_scale(kind, field[linear], xs);
    ++linear;
  }
  return out;
}

GridField u_from_v(const GridField& v) { return to_u_scale(SchemeKind::kS2, v); }
GridField u_from_w(const GridField& w) { return to_u_scale(SchemeKind::kS3, w); }

}  // namespace hjsort
