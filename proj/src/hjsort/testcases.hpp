// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <string_view>

#include "hjsort/grid.hpp"
#include "hjsort/schemes.hpp"

namespace hjsort {

inline constexpr double kDefaultK = 20.0;
inline constexpr double kDefaultBigC = 10.0;

// Benchmark right-hand sides and the exact nondecreasing solutions u of
// prod (u_{x_i})_+ = f with u = 0 where some x_i = 0.
double f1(std::span<const double> x);
double u1(std::span<const double> x);

double f2(std::span<const double> x, double k = kDefaultK);
double u2(std::span<const double> x, double k = kDefaultK);

// w3 = C max_i x_i + sum_j x_j (unnormalised); u3 = n (prod x)^(1/n) w3 / (C + n).
double w3(std::span<const double> x, double big_c = kDefaultBigC);
double f3(std::span<const double> x, double big_c = kDefaultBigC);
double u3(std::span<const double> x, double big_c = kDefaultBigC);

enum class CaseKind { kF1, kF2, kF3, kConstant };

class TestCase {
 public:
  static TestCase f1();
  static TestCase f2(double k = kDefaultK);
  static TestCase f3(double big_c = kDefaultBigC);
  static TestCase constant(double c);

  // "f1", "f2", "f3" or "const:<c>".
  static TestCase parse(std::string_view name, double k = kDefaultK, double big_c = kDefaultBigC);

  CaseKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  std::string name() const;

  double f(std::span<const double> x) const;
  double u(std::span<const double> x) const;
  RightHandSide rhs() const;

 private:
  TestCase(CaseKind kind, double param) : kind_(kind), param_(param) {}
  CaseKind kind_;
  double param_;
};

// Changes of variable between the three unknowns:
//   v = u^n / n^n,  u = n (x_1...x_n)^(1/n) w.
double u_from_v(double v, int n);
double v_from_u(double u, int n);
double u_from_w(double w, std::span<const double> x);
// Undefined on the boundary; throws there.
double w_from_u(double u, std::span<const double> x);

// Pointwise value of a scheme's unknown mapped to the u scale.
double to_u_scale(SchemeKind kind, double value, std::span<const double> x);

// Field versions. Values in [-1e-12, 0) are treated as 0; anything more
// negative is a domain error.
GridField u_from_v(const GridField& v);
GridField u_from_w(const GridField& w);
GridField to_u_scale(SchemeKind kind, const GridField& field);

}  // namespace hjsort
