// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: solve, convergence and pareto subcommands.
// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjsort.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr double kDefaultMemCap = 8.0 * 1024 * 1024 * 1024;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using FieldPtr = std::unique_ptr<hjs_field, Deleter<hjs_field, hjs_field_destroy>>;
using RhsPtr = std::unique_ptr<hjs_rhs, Deleter<hjs_rhs, hjs_rhs_destroy>>;
using StudyPtr = std::unique_ptr<hjs_study, Deleter<hjs_study, hjs_study_destroy>>;
using CloudPtr = std::unique_ptr<hjs_cloud, Deleter<hjs_cloud, hjs_cloud_destroy>>;

// Invalid arguments detected by the library before any computation are
// configuration errors; everything else is a runtime failure.
void check(hjs_status status, bool config_stage = false) {
  if (status == HJS_OK) return;
  if (config_stage && status == HJS_ERR_INVALID_ARGUMENT) throw ConfigError(hjs_last_error());
  throw RuntimeError(hjs_last_error());
}

std::string output_dir() {
  const char* env = std::getenv("HJSORT_OUT_DIR");
  return env && *env ? env : ".";
}

double memory_cap(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HJSORT_MEM_CAP"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw ConfigError("HJSORT_MEM_CAP must be a positive byte count");
    return v;
  }
  return kDefaultMemCap;
}

void guard_memory(int n, std::int64_t m, double cap) {
  const double bytes = std::pow(static_cast<double>(m + 1), n) * 8.0;
  if (bytes > cap) {
    std::ostringstream msg;
    msg << "full grid needs " << bytes << " bytes, above the memory cap of " << cap
        << " bytes; use --storage rolling or raise --mem-cap / HJSORT_MEM_CAP";
    throw ConfigError(msg.str());
  }
}

std::string resolve(const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(output_dir()) / p).string();
}

hjs_scheme parse_scheme(const std::string& s) {
  if (s == "s1" || s == "S1") return HJS_SCHEME_S1;
  if (s == "s2" || s == "S2") return HJS_SCHEME_S2;
  if (s == "s3" || s == "S3") return HJS_SCHEME_S3;
  throw ConfigError("unknown scheme '" + s + "' (expected s1, s2 or s3)");
}

struct FSource {
  std::string case_name;
  std::string f_file;
  double k = 20.0;
  double big_c = 10.0;
};

RhsPtr make_rhs(const FSource& src, int n, std::int64_t m) {
  hjs_rhs* raw = nullptr;
  if (!src.f_file.empty()) {
    hjs_field* field = nullptr;
    check(hjs_field_load(src.f_file.c_str(), &field));
    FieldPtr owned(field);
    if (hjs_field_dim(field) != n || hjs_field_m(field) != m) {
      throw ConfigError("f-file grid (n=" + std::to_string(hjs_field_dim(field)) +
                        ", m=" + std::to_string(hjs_field_m(field)) + ") does not match --n/--m");
    }
    check(hjs_rhs_from_field(field, &raw));
  } else {
    check(hjs_rhs_from_case(src.case_name.c_str(), src.k, src.big_c, &raw), true);
  }
  return RhsPtr(raw);
}

void add_f_source(CLI::App* cmd, FSource& src, bool allow_file) {
  auto* c = cmd->add_option("--case", src.case_name, "Right-hand side: f1, f2, f3 or const:<c>");
  if (allow_file) {
    auto* f = cmd->add_option("--f-file", src.f_file, "Right-hand side as a binary grid field");
    c->excludes(f);
  }
  cmd->add_option("--k", src.k, "Frequency parameter of f2")->capture_default_str();
  cmd->add_option("--bigc", src.big_c, "Parameter C of f3")->capture_default_str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw RuntimeError("write to '" + path + "' failed");
}

// ---- solve ---------------------------------------------------------------

struct SolveConfig {
  std::string scheme = "s2";
  FSource f;
  int n = 2;
  std::int64_t m = 0;
  std::string out;
  std::string format = "bin";
  std::string report;
  std::string storage = "full";
  bool force_bisection = false;
  bool u_scale = false;
  std::optional<double> mem_cap;
};

int cmd_solve(const SolveConfig& cfg) {
  if (cfg.f.case_name.empty() == cfg.f.f_file.empty()) throw ConfigError("exactly one of --case or --f-file is required");
  const bool rolling = cfg.storage == "rolling";
  if (rolling && !cfg.out.empty()) throw ConfigError("--out needs --storage full (rolling mode keeps no field)");
  if (rolling && cfg.u_scale) throw ConfigError("--u-scale needs --storage full");
  if (cfg.n < 2 || cfg.n > 8 || cfg.m < 1) throw ConfigError("--n must lie in [2, 8] and --m must be >= 1");
  if (!rolling) guard_memory(cfg.n, cfg.m, memory_cap(cfg.mem_cap));

  hjs_solve_options opts{cfg.n, cfg.m, parse_scheme(cfg.scheme), cfg.force_bisection ? 1 : 0, rolling ? 1 : 0};
  RhsPtr rhs = make_rhs(cfg.f, cfg.n, cfg.m);

  hjs_field* raw = nullptr;
  hjs_solve_report report{};
  check(hjs_solve(&opts, rhs.get(), rolling ? nullptr : &raw, &report));
  FieldPtr field(raw);

  std::string out_path;
  if (!rolling) {
    if (cfg.u_scale) {
      hjs_field* u = nullptr;
      check(hjs_field_to_u(field.get(), opts.scheme, &u));
      field.reset(u);
    }
    out_path = resolve(cfg.out.empty() ? "solution." + std::string(cfg.format == "csv" ? "csv" : "bin") : cfg.out);
    if (cfg.format == "csv")
      check(hjs_field_save_csv(field.get(), out_path.c_str()));
    else
      check(hjs_field_save_binary(field.get(), out_path.c_str()));
  }

  nlohmann::json doc;
  doc["scheme"] = hjs_scheme_name(opts.scheme);
  doc["n"] = cfg.n;
  doc["m"] = cfg.m;
  doc["h"] = 1.0 / static_cast<double>(cfg.m);
  doc["source"] = cfg.f.f_file.empty() ? cfg.f.case_name : cfg.f.f_file;
  doc["storage"] = cfg.storage;
  doc["force_bisection"] = cfg.force_bisection;
  doc["field"] = out_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(out_path);
  doc["residual"] = {{"min_ratio", report.min_residual_ratio},
                     {"max_ratio", report.max_residual_ratio},
                     {"nodes", report.residual_nodes},
                     {"band_upper", 1.0 + 1.0 / static_cast<double>(cfg.m)}};
  doc["bisection"] = {{"nodes", report.bisection_nodes},
                      {"max_iterations", report.max_iterations},
                      {"mean_iterations", report.mean_iterations}};
  doc["linf_error"] = std::isnan(report.linf_error) ? nlohmann::json(nullptr) : nlohmann::json(report.linf_error);
  // Wall time goes to the sidecar only, so stdout stays reproducible.
  std::cout << doc.dump(2) << '\n';
  doc["wall_seconds"] = report.wall_seconds;
  const std::string report_path =
      resolve(cfg.report.empty() ? (out_path.empty() ? std::string("solution.json") : out_path + ".json") : cfg.report);
  write_text(report_path, doc.dump(2) + "\n");
  return kExitOk;
}

// ---- convergence -----------------------------------------------------------

struct ConvergenceConfig {
  FSource f;
  int n = 2;
  int max_k = 6;
  std::vector<std::int64_t> meshes;
  std::vector<std::string> schemes{"s1", "s2", "s3"};
  std::string format = "markdown";
  std::string out;
  int jobs = 1;
  bool force_bisection = false;
  std::string levelset_dir;
};

int cmd_convergence(const ConvergenceConfig& cfg, bool max_k_given) {
  if (cfg.f.case_name.empty()) throw ConfigError("--case is required");
  if (max_k_given && !cfg.meshes.empty()) throw ConfigError("--max-k and --meshes are mutually exclusive");
  if (cfg.jobs < 1) throw ConfigError("--jobs must be >= 1");
  if (cfg.n < 2 || cfg.n > 8) throw ConfigError("--n must lie in [2, 8]");
  std::vector<hjs_scheme> schemes;
  for (const auto& s : cfg.schemes) schemes.push_back(parse_scheme(s));

  std::vector<std::int64_t> meshes = cfg.meshes;
  if (meshes.empty()) {
    if (cfg.max_k < 1) throw ConfigError("--max-k must be >= 1");
    meshes.resize(static_cast<std::size_t>(cfg.max_k));
    std::size_t count = 0;
    check(hjs_default_meshes(cfg.n, cfg.max_k, meshes.data(), meshes.size(), &count), true);
    meshes.resize(count);
  }
  hjs_format format = HJS_FORMAT_MARKDOWN;
  if (cfg.format == "csv") format = HJS_FORMAT_CSV;
  if (cfg.format == "json") format = HJS_FORMAT_JSON;

  hjs_study_options opts{};
  opts.n = cfg.n;
  opts.meshes = meshes.data();
  opts.mesh_count = meshes.size();
  opts.schemes = schemes.data();
  opts.scheme_count = schemes.size();
  opts.case_name = cfg.f.case_name.c_str();
  opts.k = cfg.f.k;
  opts.big_c = cfg.f.big_c;
  opts.jobs = cfg.jobs;
  opts.force_bisection = cfg.force_bisection ? 1 : 0;
  const std::string levelsets = cfg.levelset_dir.empty() ? "" : resolve(cfg.levelset_dir);
  opts.levelset_dir = levelsets.empty() ? nullptr : levelsets.c_str();

  // Bad case names and mesh sequences are rejected before any solve starts.
  {
    hjs_rhs* probe = nullptr;
    check(hjs_rhs_from_case(opts.case_name, opts.k, opts.big_c, &probe), true);
    hjs_rhs_destroy(probe);
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      if (meshes[i] < 1 || (i > 0 && meshes[i] <= meshes[i - 1]))
        throw ConfigError("mesh sequence must be positive and strictly increasing");
    }
  }

  hjs_study* raw = nullptr;
  check(hjs_study_run(&opts, &raw));
  StudyPtr study(raw);
  char* text = nullptr;
  check(hjs_study_render(study.get(), format, &text));
  const std::string rendered(text);
  hjs_string_free(text);
  if (cfg.out.empty())
    std::cout << rendered;
  else
    write_text(resolve(cfg.out), rendered);
  return kExitOk;
}

// ---- pareto ----------------------------------------------------------------

struct ParetoConfig {
  std::string input;
  bool no_normalize = false;
  FSource f;
  std::string scheme = "s2";
  std::int64_t m = 0;
  std::string out;
  std::string report;
  std::optional<double> mem_cap;
  bool fronts_only = false;
};

int cmd_pareto(const ParetoConfig& cfg) {
  if (!cfg.f.case_name.empty() && !cfg.f.f_file.empty()) throw ConfigError("--case and --f-file are exclusive");
  const hjs_scheme scheme = parse_scheme(cfg.scheme);

  hjs_cloud* raw_cloud = nullptr;
  check(hjs_cloud_load_csv(cfg.input.c_str(), cfg.no_normalize ? 0 : 1, &raw_cloud));
  CloudPtr cloud(raw_cloud);
  const int n = hjs_cloud_dim(cloud.get());
  const std::size_t count = hjs_cloud_size(cloud.get());
  if (n < 2) throw RuntimeError(cfg.input + ": points need at least two coordinates");

  std::vector<std::int64_t> labels(count);
  check(hjs_pareto_fronts(cloud.get(), labels.data()));

  nlohmann::json doc;
  doc["input"] = cfg.input;
  doc["points"] = count;
  doc["n"] = n;
  std::int64_t max_front = 0;
  for (auto l : labels) max_front = std::max(max_front, l);
  doc["fronts"] = max_front;

  std::vector<double> ranks;
  if (!cfg.fronts_only) {
    std::int64_t m = cfg.m;
    if (m == 0) m = n == 2 ? 640 : (n == 3 ? 160 : 32);
    guard_memory(n, m, memory_cap(cfg.mem_cap));
    FSource src = cfg.f;
    if (src.case_name.empty() && src.f_file.empty()) src.case_name = "const:1";
    RhsPtr rhs = make_rhs(src, n, m);
    hjs_solve_options opts{n, m, scheme, 0, 0};
    hjs_field* raw = nullptr;
    check(hjs_solve(&opts, rhs.get(), &raw, nullptr));
    FieldPtr field(raw);
    hjs_field* u_raw = nullptr;
    check(hjs_field_to_u(field.get(), scheme, &u_raw));
    FieldPtr u_field(u_raw);
    ranks.resize(count);
    check(hjs_pde_rank(cloud.get(), u_field.get(), ranks.data()));
    doc["scheme"] = hjs_scheme_name(scheme);
    doc["m"] = m;
    doc["source"] = src.f_file.empty() ? src.case_name : src.f_file;
    if (count >= 2 && max_front >= 2) {
      double agreement = 0.0;
      check(hjs_rank_agreement(labels.data(), ranks.data(), count, &agreement));
      doc["agreement"] = agreement;
    } else {
      doc["agreement"] = nullptr;
    }
  }

  const std::string out_path = resolve(cfg.out.empty() ? "fronts.csv" : cfg.out);
  check(hjs_cloud_save_csv(cloud.get(), labels.data(), ranks.empty() ? nullptr : ranks.data(), out_path.c_str()));
  doc["output"] = out_path;
  if (!cfg.report.empty()) write_text(resolve(cfg.report), doc.dump(2) + "\n");
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone schemes for the Hamilton-Jacobi continuum limit of nondominated sorting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hjs_version()));

  SolveConfig solve_cfg;
  auto* solve = app.add_subcommand("solve", "Solve one scheme on one grid and write the field plus a JSON report");
  solve->add_option("--scheme", solve_cfg.scheme, "s1, s2 or s3")->capture_default_str();
  add_f_source(solve, solve_cfg.f, true);
  solve->add_option("--n", solve_cfg.n, "Dimension")->capture_default_str();
  solve->add_option("--m", solve_cfg.m, "Subdivisions per axis (h = 1/m)")->required();
  solve->add_option("--out", solve_cfg.out, "Field output path (relative paths go under HJSORT_OUT_DIR)");
  solve->add_option("--format", solve_cfg.format, "Field format")
      ->check(CLI::IsMember({"bin", "csv"}))
      ->capture_default_str();
  solve->add_option("--report", solve_cfg.report, "JSON report path (default: <out>.json)");
  solve->add_option("--storage", solve_cfg.storage, "full or rolling")
      ->check(CLI::IsMember({"full", "rolling"}))
      ->capture_default_str();
  solve->add_flag("--force-bisection", solve_cfg.force_bisection, "Bisect even where a closed form exists");
  solve->add_flag("--u-scale", solve_cfg.u_scale, "Write the field mapped to the u scale");
  solve->add_option("--mem-cap", solve_cfg.mem_cap, "Full-grid memory cap in bytes (default 8 GiB, env HJSORT_MEM_CAP)");

  ConvergenceConfig conv_cfg;
  auto* conv = app.add_subcommand("convergence", "Run a scheme comparison across a mesh sequence");
  add_f_source(conv, conv_cfg.f, false);
  conv->add_option("--n", conv_cfg.n, "Dimension")->capture_default_str();
  auto* max_k = conv->add_option("--max-k", conv_cfg.max_k, "Number of rows of the default mesh sequence")
                    ->capture_default_str();
  conv->add_option("--meshes", conv_cfg.meshes, "Explicit m values")->delimiter(',');
  conv->add_option("--schemes", conv_cfg.schemes, "Schemes to run")->delimiter(',')->capture_default_str();
  conv->add_option("--format", conv_cfg.format, "Table format")
      ->check(CLI::IsMember({"markdown", "csv", "json"}))
      ->capture_default_str();
  conv->add_option("--out", conv_cfg.out, "Write the table to a file instead of stdout");
  conv->add_option("--jobs", conv_cfg.jobs, "Concurrent solves")->capture_default_str();
  conv->add_flag("--force-bisection", conv_cfg.force_bisection, "Bisect even where a closed form exists");
  conv->add_option("--emit-levelsets", conv_cfg.levelset_dir, "Directory for per-run (x, u) node CSVs");

  ParetoConfig pareto_cfg;
  auto* pareto = app.add_subcommand("pareto", "Sort a point cloud into Pareto fronts and compare with PDE ranks");
  pareto->add_option("--input", pareto_cfg.input, "Point cloud CSV, one point per row")->required();
  pareto->add_flag("--no-normalize", pareto_cfg.no_normalize, "Do not map each axis onto [0,1]");
  add_f_source(pareto, pareto_cfg.f, true);
  pareto->add_option("--scheme", pareto_cfg.scheme, "Scheme used for the PDE ranks")->capture_default_str();
  pareto->add_option("--m", pareto_cfg.m, "Subdivisions per axis for the PDE solve");
  pareto->add_option("--out", pareto_cfg.out, "Output CSV (points, front, rank)");
  pareto->add_option("--report", pareto_cfg.report, "JSON summary path");
  pareto->add_option("--mem-cap", pareto_cfg.mem_cap, "Full-grid memory cap in bytes");
  pareto->add_flag("--fronts-only", pareto_cfg.fronts_only, "Skip the PDE solve and ranks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_cfg);
    if (conv->parsed()) return cmd_convergence(conv_cfg, max_k->count() > 0);
    if (pareto->parsed()) return cmd_pareto(pareto_cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RuntimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
