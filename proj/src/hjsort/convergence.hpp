// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjsort/grid.hpp"
#include "hjsort/schemes.hpp"
#include "hjsort/testcases.hpp"

namespace hjsort {

using ExactSolution = std::function<double(std::span<const double> x)>;

// max over all nodes (boundary included) of |numeric - exact(x)|
double linf_error(const GridField& numeric_u, const ExactSolution& exact);

// log(e_prev / e_cur) / log(h_prev / h_cur); empty when either error is not positive.
std::optional<double> observed_order(double e_prev, double e_cur, double h_prev, double h_cur);

// m = base * ratio^k for k = 0 .. rows-1, with (base, ratio) = (40, 4) for
// n = 2, (20, 2) for n = 3 and (4, 2) for n >= 4.
std::vector<std::int64_t> default_meshes(int n, int rows = 6);

struct StudySpec {
  std::vector<SchemeKind> schemes{SchemeKind::kS1, SchemeKind::kS2, SchemeKind::kS3};
  TestCase test_case = TestCase::f2();
  int n = 2;
  std::vector<std::int64_t> meshes;  // strictly increasing
  int jobs = 1;
  RootMethod method = RootMethod::kAuto;
  // When set, every run streams "x_1,...,x_n,u" rows to
  // <dir>/levelset_<case>_n<n>_<scheme>_m<m>.csv.
  std::optional<std::string> levelset_dir;
};

struct ConvergenceRow {
  SchemeKind scheme = SchemeKind::kS1;
  std::int64_t m = 0;
  double h = 0.0;
  double error = 0.0;
  std::optional<double> order;
  double seconds = 0.0;
};

struct StudyResult {
  StudySpec spec;
  std::vector<ConvergenceRow> rows;  // grouped by scheme in spec order, increasing m

  std::vector<ConvergenceRow> rows_for(SchemeKind kind) const;
};

// One solve per (scheme, m) with rolling storage; the u-scale error is
// accumulated while sweeping.
ConvergenceRow run_single(SchemeKind kind, const TestCase& test_case, int n, std::int64_t m,
                          RootMethod method = RootMethod::kAuto,
                          const std::optional<std::string>& levelset_dir = std::nullopt);

StudyResult run_study(const StudySpec& spec);

// Paper layout: one row per mesh, (error, order) column pair per scheme;
// errors to 2 significant figures, orders to 2 decimals.
std::string render_markdown(const StudyResult& result);
// scheme,n,case,m,h,error,order with 17 significant digits.
std::string render_csv(const StudyResult& result);
std::string render_json(const StudyResult& result);

}  // namespace hjsort
