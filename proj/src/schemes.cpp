// SPDX-License-Identifier: Apache-2.0
#include "hjsort/schemes.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace hjsort {

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kS1:
      return "S1";
    case SchemeKind::kS2:
      return "S2";
    case SchemeKind::kS3:
      return "S3";
  }
  return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
  if (name == "s1" || name == "S1") return SchemeKind::kS1;
  if (name == "s2" || name == "S2") return SchemeKind::kS2;
  if (name == "s3" || name == "S3") return SchemeKind::kS3;
  return std::nullopt;
}

namespace {

double ipow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

double max_of(std::span<const double> a) { return *std::max_element(a.begin(), a.end()); }

void validate(const UpdateInputs& in, bool needs_x) {
  if (in.n < 2 || in.n > kMaxDim) throw Error(ErrorCode::kInvalidArgument, "update dimension out of range");
  if (static_cast<int>(in.a.size()) != in.n)
    throw Error(ErrorCode::kInvalidArgument, "neighbour count does not match dimension");
  if (needs_x && static_cast<int>(in.x.size()) != in.n)
    throw Error(ErrorCode::kInvalidArgument, "coordinate count does not match dimension");
  if (!(in.h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mesh size must be positive");
  if (!(in.f >= 0.0) || !std::isfinite(in.f))
    throw Error(ErrorCode::kDomain, "right-hand side must be finite and >= 0, got " + std::to_string(in.f));
  for (double v : in.a) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::kDomain, "neighbour values must be finite and >= 0, got " + std::to_string(v));
  }
}

// c_i = n x_i / h
std::array<double, kMaxDim> s3_weights(const UpdateInputs& in) {
  std::array<double, kMaxDim> c{};
  for (int i = 0; i < in.n; ++i) c[static_cast<std::size_t>(i)] = in.n * in.x[static_cast<std::size_t>(i)] / in.h;
  return c;
}

double s3_floor(const UpdateInputs& in, const std::array<double, kMaxDim>& c) {
  double sigma = 0.0;
  for (int i = 0; i < in.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    sigma = std::max(sigma, c[k] * in.a[k] / (1.0 + c[k]));
  }
  return sigma;
}

// Rounding can leave the residual a few ulps short of the target at an
// analytically exact upper bound; step the end outward until it is not.
template <typename Residual>
Bracket raise_upper(Residual&& residual, double target, Bracket b) {
  double step = std::max(std::abs(b.hi), std::numeric_limits<double>::min()) * 4.0 *
                std::numeric_limits<double>::epsilon();
  for (int tries = 0; tries < 64 && residual(b.hi) < target; ++tries) {
    b.hi += step;
    step *= 2.0;
  }
  return b;
}

template <typename Residual>
NodeUpdate bisect_node(Residual&& residual, double target, Bracket bracket, double band) {
  bracket = raise_upper(residual, target, bracket);
  const BisectionResult r = bisect_max_root(residual, target, bracket, band);
  return {r.value, r.iterations, r.residual / target, false, true};
}

}  // namespace

double node_target(SchemeKind kind, const UpdateInputs& in) {
  return kind == SchemeKind::kS3 ? in.f : ipow(in.h, in.n) * in.f;
}

double node_residual(SchemeKind kind, const UpdateInputs& in, double t) {
  double p = 1.0;
  switch (kind) {
    case SchemeKind::kS1:
      for (double a : in.a) p *= std::max(t - a, 0.0);
      return p;
    case SchemeKind::kS2:
      for (double a : in.a) p *= std::max(t - a, 0.0);
      return p == 0.0 ? 0.0 : p / ipow(t, in.n - 1);
    case SchemeKind::kS3: {
      const auto c = s3_weights(in);
      for (int i = 0; i < in.n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        p *= std::max((1.0 + c[k]) * t - c[k] * in.a[k], 0.0);
      }
      return p;
    }
  }
  return 0.0;
}

Bracket initial_bracket(SchemeKind kind, const UpdateInputs& in) {
  const double root_f = std::pow(in.f, 1.0 / in.n);
  switch (kind) {
    case SchemeKind::kS1: {
      const double lo = max_of(in.a);
      return {lo, lo + in.h * root_f};
    }
    case SchemeKind::kS2: {
      const double sum = std::accumulate(in.a.begin(), in.a.end(), 0.0);
      return {max_of(in.a), sum + ipow(in.h, in.n) * in.f};
    }
    case SchemeKind::kS3: {
      const auto c = s3_weights(in);
      const double sigma = s3_floor(in, c);
      double scale = 1.0;
      for (int i = 0; i < in.n; ++i) scale *= in.n * in.x[static_cast<std::size_t>(i)] + in.h;
      return {sigma, sigma + in.h * root_f * std::pow(scale, -1.0 / in.n)};
    }
  }
  return {};
}

BisectionResult bisect_max_root(SchemeKind form, const UpdateInputs& in, Bracket bracket) {
  const double target = node_target(form, in);
  return bisect_max_root([&](double t) { return node_residual(form, in, t); }, target, bracket, in.h);
}

NodeUpdate s1_node(const UpdateInputs& in, RootMethod method) {
  validate(in, false);
  if (in.f == 0.0) return {max_of(in.a), 0, 1.0, true};
  const double target = node_target(SchemeKind::kS1, in);
  if (in.n == 2 && method == RootMethod::kAuto) {
    const double a1 = in.a[0];
    const double a2 = in.a[1];
    const double d = a1 - a2;
    const double t = 0.5 * (a1 + a2) + 0.5 * std::sqrt(d * d + 4.0 * target);
    return {t, 0, node_residual(SchemeKind::kS1, in, t) / target, false};
  }
  return bisect_node([&](double t) { return node_residual(SchemeKind::kS1, in, t); }, target,
                     initial_bracket(SchemeKind::kS1, in), in.h);
}

NodeUpdate s2_node(const UpdateInputs& in, RootMethod method) {
  validate(in, false);
  const double b = node_target(SchemeKind::kS2, in);
  if (b == 0.0) return {max_of(in.a), 0, 1.0, true};
  if (max_of(in.a) == 0.0) return {b, 0, 1.0, true};
  if (in.n == 2 && method == RootMethod::kAuto) {
    const double sum = in.a[0] + in.a[1];
    const double diff = in.a[0] - in.a[1];
    const double t = 0.5 * (sum + b) + 0.5 * std::sqrt(diff * diff + 2.0 * b * sum + b * b);
    return {t, 0, node_residual(SchemeKind::kS2, in, t) / b, false};
  }
  return bisect_node([&](double t) { return node_residual(SchemeKind::kS2, in, t); }, b,
                     initial_bracket(SchemeKind::kS2, in), in.h);
}

NodeUpdate s3_node(const UpdateInputs& in, RootMethod method) {
  validate(in, true);
  for (double xi : in.x) {
    if (!(xi >= 0.0)) throw Error(ErrorCode::kDomain, "S3 node coordinates must be >= 0");
  }
  if (in.f == 0.0) return {s3_floor(in, s3_weights(in)), 0, 1.0, true};
  if (in.n == 2 && method == RootMethod::kAuto) {
    // h^2 times the node equation is a quadratic with leading coefficient
    // (2 x1 + h)(2 x2 + h); its larger root, divided through by that product.
    const double h = in.h;
    const double x1 = in.x[0];
    const double x2 = in.x[1];
    const double p1 = x1 * (2.0 * x2 + h) * in.a[0];
    const double p2 = x2 * (2.0 * x1 + h) * in.a[1];
    const double lead = (2.0 * x1 + h) * (2.0 * x2 + h);
    const double c = p1 + p2;
    const double d = p1 - p2;
    const double t = (c + std::sqrt(d * d + lead * h * h * in.f)) / lead;
    return {t, 0, node_residual(SchemeKind::kS3, in, t) / in.f, false};
  }
  return bisect_node([&](double t) { return node_residual(SchemeKind::kS3, in, t); }, in.f,
                     initial_bracket(SchemeKind::kS3, in), in.h);
}

NodeUpdate update_node(SchemeKind kind, const UpdateInputs& in, RootMethod method) {
  switch (kind) {
    case SchemeKind::kS1:
      return s1_node(in, method);
    case SchemeKind::kS2:
      return s2_node(in, method);
    case SchemeKind::kS3:
      return s3_node(in, method);
  }
  return {};
}

RightHandSide RightHandSide::constant(double c) {
  RightHandSide r;
  r.source_ = c;
  return r;
}

RightHandSide RightHandSide::from_function(Function f) {
  RightHandSide r;
  r.source_ = std::move(f);
  return r;
}

RightHandSide RightHandSide::from_field(GridField field) {
  RightHandSide r;
  r.source_ = std::move(field);
  return r;
}

double RightHandSide::operator()(std::int64_t linear, std::span<const double> x) const {
  if (const double* c = std::get_if<double>(&source_)) return *c;
  if (const Function* f = std::get_if<Function>(&source_)) return (*f)(x);
  return std::get<GridField>(source_)[linear];
}

void RightHandSide::check_compatible(const GridSpec& spec) const {
  if (const GridField* field = std::get_if<GridField>(&source_)) {
    if (!(field->spec() == spec))
      throw Error(ErrorCode::kInvalidArgument, "right-hand side field grid (n=" +
                                                   std::to_string(field->spec().dim()) +
                                                   ", m=" + std::to_string(field->spec().m()) +
                                                   ") does not match the solve grid");
  }
}

namespace {

std::string describe(const MultiIndex& idx) {
  std::ostringstream out;
  out << "node (";
  for (int j = 0; j < idx.n; ++j) out << (j ? "," : "") << idx[j];
  out << ")";
  return out.str();
}

}  // namespace

SolveReport solve(const GridSpec& spec, SchemeKind kind, const RightHandSide& f, const SolveOptions& options) {
  f.check_compatible(spec);
  const auto start = std::chrono::steady_clock::now();
  const int n = spec.dim();
  const double h = spec.h();
  const auto offsets = backward_offsets(spec);
  const bool boundary_zero = kind != SchemeKind::kS3;

  SolveReport report;
  std::optional<GridField> full;
  std::optional<RollingWindow> window;
  if (options.storage == Storage::kFull) {
    full.emplace(spec);
  } else {
    window.emplace(spec);
  }
  auto load = [&](std::int64_t linear) { return full ? (*full)[linear] : window->slot(linear); };
  auto store = [&](std::int64_t linear, double v) {
    if (full)
      (*full)[linear] = v;
    else
      window->slot(linear) = v;
  };

  const std::int64_t slab = spec.node_count() / spec.nodes_per_axis();
  const std::int64_t slab_start = spec.node_count() - slab;
  if (!full) report.final_slab.reserve(static_cast<std::size_t>(slab));

  std::array<double, kMaxDim> x{};
  std::array<double, kMaxDim> a{};
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
  const std::span<const double> as(a.data(), static_cast<std::size_t>(n));
  UpdateInputs in{n, h, xs, 0.0, as};

  double iteration_sum = 0.0;
  MultiIndex idx;
  idx.n = n;
  std::int64_t linear = 0;
  do {
    bool boundary = false;
    for (int j = 0; j < n; ++j) {
      const auto k = static_cast<std::size_t>(j);
      x[k] = spec.coordinate(idx[j]);
      if (idx[j] == 0) {
        boundary = true;
        a[k] = 0.0;
      } else {
        a[k] = load(linear - offsets[k]);
      }
    }
    double value = 0.0;
    if (!(boundary && boundary_zero)) {
      in.f = f(linear, xs);
      NodeUpdate u;
      try {
        u = update_node(kind, in, options.method);
      } catch (const Error& e) {
        throw Error(e.code(), describe(idx) + ": " + e.what());
      }
      value = u.value;
      if (!u.degenerate) {
        if (report.residual_nodes == 0) {
          report.min_residual_ratio = u.residual_ratio;
          report.max_residual_ratio = u.residual_ratio;
        } else {
          report.min_residual_ratio = std::min(report.min_residual_ratio, u.residual_ratio);
          report.max_residual_ratio = std::max(report.max_residual_ratio, u.residual_ratio);
        }
        ++report.residual_nodes;
      }
      if (u.bisected) {
        ++report.bisection_nodes;
        iteration_sum += u.iterations;
        report.max_iterations = std::max(report.max_iterations, u.iterations);
      }
    }
    store(linear, value);
    if (options.observer) options.observer(linear, xs, value);
    if (!full && linear >= slab_start) report.final_slab.push_back(value);
    ++linear;
  } while (advance(idx, spec.m()));

  if (report.bisection_nodes > 0) report.mean_iterations = iteration_sum / static_cast<double>(report.bisection_nodes);
  if (full) {
    report.final_slab.assign(full->values().begin() + slab_start, full->values().end());
    report.field = std::move(full);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace hjsort
