// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hjsort/error.hpp"
#include "hjsort/grid.hpp"

namespace hjsort {

// S1: upwind scheme for u directly, zero on the boundary.
// S2: scheme for v = u^n / n^n, zero on the boundary.
// S3: scheme for w with u = n (x_1...x_n)^(1/n) w, no boundary condition.
enum class SchemeKind { kS1, kS2, kS3 };

std::string_view to_string(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

// Everything a node update needs. a[i] is the value at x - h e_i (0 beyond
// the boundary for S1/S2; ignored by S3 where x_i = 0).
struct UpdateInputs {
  int n = 0;
  double h = 0.0;
  std::span<const double> x;
  double f = 0.0;
  std::span<const double> a;
};

enum class RootMethod {
  kAuto,       // closed form in n = 2, bisection otherwise
  kBisection,  // always bisect (cross-validation)
};

struct NodeUpdate {
  double value = 0.0;
  int iterations = 0;
  // residual(value) / target; 1 when the update is a degenerate exact case
  double residual_ratio = 1.0;
  bool degenerate = false;
  bool bisected = false;
};

NodeUpdate s1_node(const UpdateInputs& in, RootMethod method = RootMethod::kAuto);
NodeUpdate s2_node(const UpdateInputs& in, RootMethod method = RootMethod::kAuto);
NodeUpdate s3_node(const UpdateInputs& in, RootMethod method = RootMethod::kAuto);
NodeUpdate update_node(SchemeKind kind, const UpdateInputs& in, RootMethod method = RootMethod::kAuto);

inline double s1_update(const UpdateInputs& in) { return s1_node(in).value; }
inline double s2_update(const UpdateInputs& in) { return s2_node(in).value; }
inline double s3_update(const UpdateInputs& in) { return s3_node(in).value; }

// Residual of each scheme's node equation as a function of the trial value t,
// and the target it must hit:
//   S1: prod (t - a_i)_+                      target h^n f
//   S2: prod (t - a_i)_+ / t^(n-1)            target h^n f
//   S3: prod ((1 + c_i) t - c_i a_i)_+        target f,   c_i = n x_i / h
// All three are nondecreasing in t above the bracket's lower end.
double node_residual(SchemeKind kind, const UpdateInputs& in, double t);
double node_target(SchemeKind kind, const UpdateInputs& in);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Initial search intervals:
//   S1 [max a, max a + h f^(1/n)]
//   S2 [max a, sum a + h^n f]
//   S3 [s, s + h f^(1/n) prod (n x_i + h)^(-1/n)],  s = max n x_i a_i / (n x_i + h)
Bracket initial_bracket(SchemeKind kind, const UpdateInputs& in);

inline constexpr int kMaxBisections = 200;

struct BisectionResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Shrinks the bracket until the residual at its upper end lies in
// [target, (1 + band) target], and returns that upper end. Stops early when
// lo and hi are adjacent doubles; the residual then stays above the band.
template <typename Residual>
BisectionResult bisect_max_root(Residual&& residual, double target, Bracket bracket, double band) {
  if (!(bracket.hi >= bracket.lo))
    throw Error(ErrorCode::kInvalidArgument, "bisection bracket has hi < lo");
  double lo = bracket.lo;
  double hi = bracket.hi;
  double r_hi = residual(hi);
  if (!(r_hi >= target))
    throw Error(ErrorCode::kInvalidArgument, "residual at bracket upper end is below the target");
  const double accept = (1.0 + band) * target;
  int iterations = 0;
  while (r_hi > accept) {
    if (iterations == kMaxBisections) {
      throw Error(ErrorCode::kIterationCap,
                  "bisection did not enter the acceptance band after " + std::to_string(kMaxBisections) +
                      " steps (bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "], target " +
                      std::to_string(target) + ")");
    }
    const double mid = lo + 0.5 * (hi - lo);
    // Adjacent doubles: hi is the closest representable root.
    if (!(mid > lo && mid < hi)) break;
    const double r_mid = residual(mid);
    if (r_mid >= target) {
      hi = mid;
      r_hi = r_mid;
    } else {
      lo = mid;
    }
    ++iterations;
  }
  return {hi, iterations, r_hi};
}

// Bisection on one scheme's residual form with acceptance band h.
BisectionResult bisect_max_root(SchemeKind form, const UpdateInputs& in, Bracket bracket);

// Right-hand side f, evaluated per node.
class RightHandSide {
 public:
  using Function = std::function<double(std::span<const double> x)>;

  static RightHandSide constant(double c);
  static RightHandSide from_function(Function f);
  static RightHandSide from_field(GridField field);

  double operator()(std::int64_t linear, std::span<const double> x) const;
  void check_compatible(const GridSpec& spec) const;

 private:
  std::variant<double, Function, GridField> source_ = 0.0;
};

enum class Storage { kFull, kRolling };

using NodeObserver = std::function<void(std::int64_t linear, std::span<const double> x, double value)>;

struct SolveOptions {
  Storage storage = Storage::kFull;
  RootMethod method = RootMethod::kAuto;
  // Called once per node, in sweep order, with the freshly computed value.
  NodeObserver observer;
};

struct SolveReport {
  std::optional<GridField> field;  // full storage only
  std::vector<double> final_slab;  // values on the slab x_1 = 1, sweep order
  double min_residual_ratio = 1.0;
  double max_residual_ratio = 1.0;
  std::int64_t residual_nodes = 0;  // nodes with a positive target
  std::int64_t bisection_nodes = 0;
  int max_iterations = 0;
  double mean_iterations = 0.0;  // over bisection nodes
  double wall_seconds = 0.0;
};

// Single lexicographic pass. Update errors are rethrown with the node's
// multi-index prepended.
SolveReport solve(const GridSpec& spec, SchemeKind kind, const RightHandSide& f, const SolveOptions& options = {});

}  // namespace hjsort
