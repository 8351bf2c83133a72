// SPDX-License-Identifier: Apache-2.0
#include "hjsort/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace hjsort {

double linf_error(const GridField& numeric_u, const ExactSolution& exact) {
  const GridSpec& spec = numeric_u.spec();
  std::array<double, kMaxDim> x{};
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(spec.dim()));
  double err = 0.0;
  std::int64_t linear = 0;
  for (const MultiIndex& idx : sweep_order(spec)) {
    for (int j = 0; j < spec.dim(); ++j) x[static_cast<std::size_t>(j)] = spec.coordinate(idx[j]);
    err = std::max(err, std::abs(numeric_u[linear++] - exact(xs)));
  }
  return err;
}

std::optional<double> observed_order(double e_prev, double e_cur, double h_prev, double h_cur) {
  if (!(h_prev > 0.0) || !(h_cur > 0.0) || h_prev == h_cur)
    throw Error(ErrorCode::kInvalidArgument, "observed order needs distinct positive mesh sizes");
  if (!(e_prev > 0.0) || !(e_cur > 0.0)) return std::nullopt;
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

std::vector<std::int64_t> default_meshes(int n, int rows) {
  if (rows < 1) throw Error(ErrorCode::kInvalidArgument, "mesh sequence needs at least one row");
  std::int64_t base = 4;
  std::int64_t ratio = 2;
  if (n == 2) {
    base = 40;
    ratio = 4;
  } else if (n == 3) {
    base = 20;
  }
  std::vector<std::int64_t> meshes;
  std::int64_t m = base;
  for (int k = 0; k < rows; ++k) {
    meshes.push_back(m);
    m *= ratio;
  }
  return meshes;
}

std::vector<ConvergenceRow> StudyResult::rows_for(SchemeKind kind) const {
  std::vector<ConvergenceRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [&](const ConvergenceRow& r) { return r.scheme == kind; });
  return out;
}

namespace {

std::string scheme_tag(SchemeKind kind) {
  std::string s(to_string(kind));
  s[0] = 's';
  return s;
}

}  // namespace

ConvergenceRow run_single(SchemeKind kind, const TestCase& test_case, int n, std::int64_t m, RootMethod method,
                          const std::optional<std::string>& levelset_dir) {
  const GridSpec spec(n, m);
  std::ofstream levelset;
  if (levelset_dir) {
    std::filesystem::create_directories(*levelset_dir);
    const auto path = std::filesystem::path(*levelset_dir) /
                      ("levelset_" + test_case.name() + "_n" + std::to_string(n) + "_" + scheme_tag(kind) + "_m" +
                       std::to_string(m) + ".csv");
    levelset.open(path);
    if (!levelset) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
    levelset.precision(17);
  }

  double err = 0.0;
  SolveOptions options;
  options.storage = Storage::kRolling;
  options.method = method;
  options.observer = [&](std::int64_t, std::span<const double> x, double value) {
    const double u = to_u_scale(kind, value, x);
    err = std::max(err, std::abs(u - test_case.u(x)));
    if (levelset.is_open()) {
      for (double xi : x) levelset << xi << ',';
      levelset << u << '\n';
    }
  };
  const SolveReport report = solve(spec, kind, test_case.rhs(), options);
  if (levelset.is_open() && !levelset) throw Error(ErrorCode::kIo, "level-set output write failed");
  return {kind, m, spec.h(), err, std::nullopt, report.wall_seconds};
}

StudyResult run_study(const StudySpec& spec) {
  if (spec.schemes.empty()) throw Error(ErrorCode::kInvalidArgument, "study needs at least one scheme");
  if (spec.meshes.empty()) throw Error(ErrorCode::kInvalidArgument, "study needs at least one mesh");
  for (std::size_t i = 1; i < spec.meshes.size(); ++i) {
    if (spec.meshes[i] <= spec.meshes[i - 1])
      throw Error(ErrorCode::kInvalidArgument, "mesh sequence must be strictly increasing in m");
  }

  struct Task {
    SchemeKind kind;
    std::int64_t m;
  };
  std::vector<Task> tasks;
  for (SchemeKind kind : spec.schemes)
    for (std::int64_t m : spec.meshes) tasks.push_back({kind, m});

  std::vector<ConvergenceRow> rows(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        rows[i] = run_single(tasks[i].kind, spec.test_case, spec.n, tasks[i].m, spec.method, spec.levelset_dir);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(spec.jobs, 1, static_cast<int>(tasks.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].scheme == rows[i - 1].scheme)
      rows[i].order = observed_order(rows[i - 1].error, rows[i].error, rows[i - 1].h, rows[i].h);
  }
  return {spec, std::move(rows)};
}

namespace {

std::string sci2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1e", v);
  return buf;
}

std::string fixed2(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string render_markdown(const StudyResult& result) {
  std::ostringstream out;
  out << "Rates of convergence for " << result.spec.test_case.name() << " in dimension n=" << result.spec.n
      << "\n\n| Mesh size h |";
  for (SchemeKind kind : result.spec.schemes) out << ' ' << to_string(kind) << " l-inf error | Order |";
  out << "\n|---|";
  for (std::size_t i = 0; i < result.spec.schemes.size(); ++i) out << "---|---|";
  out << '\n';
  for (std::size_t r = 0; r < result.spec.meshes.size(); ++r) {
    out << "| " << sci2(1.0 / static_cast<double>(result.spec.meshes[r])) << " |";
    for (SchemeKind kind : result.spec.schemes) {
      const auto rows = result.rows_for(kind);
      out << ' ' << sci2(rows[r].error) << " | " << fixed2(rows[r].order) << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string render_csv(const StudyResult& result) {
  std::ostringstream out;
  out << "scheme,n,case,m,h,error,order\n";
  for (const ConvergenceRow& row : result.rows) {
    out << to_string(row.scheme) << ',' << result.spec.n << ',' << result.spec.test_case.name() << ',' << row.m
        << ',' << full_precision(row.h) << ',' << full_precision(row.error) << ','
        << (row.order ? full_precision(*row.order) : "") << '\n';
  }
  return out.str();
}

std::string render_json(const StudyResult& result) {
  nlohmann::json doc;
  doc["case"] = result.spec.test_case.name();
  doc["n"] = result.spec.n;
  doc["meshes"] = result.spec.meshes;
  nlohmann::json rows = nlohmann::json::array();
  for (const ConvergenceRow& row : result.rows) {
    nlohmann::json r;
    r["scheme"] = std::string(to_string(row.scheme));
    r["m"] = row.m;
    r["h"] = row.h;
    r["error"] = row.error;
    r["order"] = row.order ? nlohmann::json(*row.order) : nlohmann::json(nullptr);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace hjsort
