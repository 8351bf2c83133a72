// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "hjsort.h"
#include "hjsort/convergence.hpp"
#include "hjsort/error.hpp"
#include "hjsort/grid.hpp"
#include "hjsort/pareto.hpp"
#include "hjsort/schemes.hpp"
#include "hjsort/testcases.hpp"

struct hjs_field {
  hjsort::GridField field;
};

struct hjs_rhs {
  hjsort::RightHandSide rhs;
  std::optional<hjsort::TestCase> test_case;
};

struct hjs_study {
  hjsort::StudyResult result;
};

struct hjs_cloud {
  hjsort::PointCloud cloud;
};

namespace {

thread_local std::string last_error;

hjs_status fail(hjs_status status, const std::string& message) {
  last_error = message;
  return status;
}

hjs_status to_status(hjsort::ErrorCode code) {
  switch (code) {
    case hjsort::ErrorCode::kInvalidArgument:
      return HJS_ERR_INVALID_ARGUMENT;
    case hjsort::ErrorCode::kDomain:
      return HJS_ERR_DOMAIN;
    case hjsort::ErrorCode::kIterationCap:
      return HJS_ERR_ITERATION_CAP;
    case hjsort::ErrorCode::kIo:
      return HJS_ERR_IO;
    case hjsort::ErrorCode::kParse:
      return HJS_ERR_PARSE;
    case hjsort::ErrorCode::kOutOfRange:
      return HJS_ERR_OUT_OF_RANGE;
    case hjsort::ErrorCode::kResource:
      return HJS_ERR_RESOURCE;
  }
  return HJS_ERR_INTERNAL;
}

template <typename Body>
hjs_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return HJS_OK;
  } catch (const hjsort::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HJS_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(HJS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HJS_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw hjsort::Error(hjsort::ErrorCode::kInvalidArgument, message);
}

hjsort::SchemeKind to_kind(hjs_scheme scheme) {
  switch (scheme) {
    case HJS_SCHEME_S1:
      return hjsort::SchemeKind::kS1;
    case HJS_SCHEME_S2:
      return hjsort::SchemeKind::kS2;
    case HJS_SCHEME_S3:
      return hjsort::SchemeKind::kS3;
  }
  throw hjsort::Error(hjsort::ErrorCode::kInvalidArgument, "unknown scheme " + std::to_string(scheme));
}

hjs_scheme to_scheme(hjsort::SchemeKind kind) {
  switch (kind) {
    case hjsort::SchemeKind::kS1:
      return HJS_SCHEME_S1;
    case hjsort::SchemeKind::kS2:
      return HJS_SCHEME_S2;
    case hjsort::SchemeKind::kS3:
      return HJS_SCHEME_S3;
  }
  return HJS_SCHEME_S1;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* hjs_last_error(void) { return last_error.c_str(); }

const char* hjs_version(void) { return "1.0.0"; }

const char* hjs_scheme_name(hjs_scheme scheme) {
  switch (scheme) {
    case HJS_SCHEME_S1:
      return "S1";
    case HJS_SCHEME_S2:
      return "S2";
    case HJS_SCHEME_S3:
      return "S3";
  }
  return "unknown";
}

hjs_status hjs_field_create(int n, int64_t m, const double* values, hjs_field** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    hjsort::GridSpec spec(n, m);
    hjsort::GridField field(spec);
    if (values != nullptr) std::memcpy(field.values().data(), values, field.values().size_bytes());
    *out = new hjs_field{std::move(field)};
  });
}

void hjs_field_destroy(hjs_field* field) { delete field; }
int hjs_field_dim(const hjs_field* field) { return field ? field->field.spec().dim() : 0; }
int64_t hjs_field_m(const hjs_field* field) { return field ? field->field.spec().m() : 0; }
int64_t hjs_field_size(const hjs_field* field) { return field ? field->field.spec().node_count() : 0; }
const double* hjs_field_data(const hjs_field* field) { return field ? field->field.values().data() : nullptr; }

hjs_status hjs_field_load(const char* path, hjs_field** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new hjs_field{hjsort::read_field_binary(path)};
  });
}

hjs_status hjs_field_save_binary(const hjs_field* field, const char* path) {
  return guarded([&] {
    require(field != nullptr && path != nullptr, "null argument");
    hjsort::write_field_binary(field->field, path);
  });
}

hjs_status hjs_field_save_csv(const hjs_field* field, const char* path) {
  return guarded([&] {
    require(field != nullptr && path != nullptr, "null argument");
    hjsort::write_field_csv(field->field, path);
  });
}

hjs_status hjs_field_to_u(const hjs_field* field, hjs_scheme scheme, hjs_field** out) {
  return guarded([&] {
    require(field != nullptr && out != nullptr, "null argument");
    *out = new hjs_field{hjsort::to_u_scale(to_kind(scheme), field->field)};
  });
}

hjs_status hjs_rhs_from_case(const char* name, double k, double big_c, hjs_rhs** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const auto tc = hjsort::TestCase::parse(name, k, big_c);
    *out = new hjs_rhs{tc.rhs(), tc};
  });
}

hjs_status hjs_rhs_from_field(const hjs_field* field, hjs_rhs** out) {
  return guarded([&] {
    require(field != nullptr && out != nullptr, "null argument");
    *out = new hjs_rhs{hjsort::RightHandSide::from_field(field->field), std::nullopt};
  });
}

void hjs_rhs_destroy(hjs_rhs* rhs) { delete rhs; }

int hjs_rhs_has_exact(const hjs_rhs* rhs) { return rhs && rhs->test_case ? 1 : 0; }

hjs_status hjs_solve(const hjs_solve_options* options, const hjs_rhs* rhs, hjs_field** out_field,
                     hjs_solve_report* report) {
  if (out_field) *out_field = nullptr;
  return guarded([&] {
    require(options != nullptr && rhs != nullptr, "null argument");
    const hjsort::GridSpec spec(options->n, options->m);
    const auto kind = to_kind(options->scheme);
    hjsort::SolveOptions opts;
    opts.storage = options->rolling ? hjsort::Storage::kRolling : hjsort::Storage::kFull;
    opts.method = options->force_bisection ? hjsort::RootMethod::kBisection : hjsort::RootMethod::kAuto;
    double err = 0.0;
    if (rhs->test_case) {
      opts.observer = [&](std::int64_t, std::span<const double> x, double value) {
        err = std::max(err, std::abs(hjsort::to_u_scale(kind, value, x) - rhs->test_case->u(x)));
      };
    }
    hjsort::SolveReport r = hjsort::solve(spec, kind, rhs->rhs, opts);
    if (report) {
      report->min_residual_ratio = r.min_residual_ratio;
      report->max_residual_ratio = r.max_residual_ratio;
      report->residual_nodes = r.residual_nodes;
      report->bisection_nodes = r.bisection_nodes;
      report->max_iterations = r.max_iterations;
      report->mean_iterations = r.mean_iterations;
      report->wall_seconds = r.wall_seconds;
      report->linf_error = rhs->test_case ? err : std::numeric_limits<double>::quiet_NaN();
    }
    if (out_field && r.field) *out_field = new hjs_field{std::move(*r.field)};
  });
}

hjs_status hjs_default_meshes(int n, int rows, int64_t* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto meshes = hjsort::default_meshes(n, rows);
    require(meshes.size() <= capacity, "mesh buffer too small");
    std::copy(meshes.begin(), meshes.end(), out);
    if (count) *count = meshes.size();
  });
}

hjs_status hjs_study_run(const hjs_study_options* options, hjs_study** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr, "null argument");
    require(options->case_name != nullptr, "study needs a case name");
    require(options->meshes != nullptr || options->mesh_count == 0, "null mesh list");
    hjsort::StudySpec spec;
    spec.n = options->n;
    spec.test_case = hjsort::TestCase::parse(options->case_name, options->k, options->big_c);
    spec.meshes.assign(options->meshes, options->meshes + options->mesh_count);
    if (options->schemes != nullptr && options->scheme_count > 0) {
      spec.schemes.clear();
      for (size_t i = 0; i < options->scheme_count; ++i) spec.schemes.push_back(to_kind(options->schemes[i]));
    }
    spec.jobs = options->jobs;
    spec.method = options->force_bisection ? hjsort::RootMethod::kBisection : hjsort::RootMethod::kAuto;
    if (options->levelset_dir) spec.levelset_dir = options->levelset_dir;
    *out = new hjs_study{hjsort::run_study(spec)};
  });
}

void hjs_study_destroy(hjs_study* study) { delete study; }

size_t hjs_study_row_count(const hjs_study* study) { return study ? study->result.rows.size() : 0; }

hjs_status hjs_study_row_at(const hjs_study* study, size_t index, hjs_study_row* out) {
  return guarded([&] {
    require(study != nullptr && out != nullptr, "null argument");
    if (index >= study->result.rows.size())
      throw hjsort::Error(hjsort::ErrorCode::kOutOfRange, "row index out of range");
    const auto& row = study->result.rows[index];
    out->scheme = to_scheme(row.scheme);
    out->m = row.m;
    out->h = row.h;
    out->error = row.error;
    out->order = row.order ? *row.order : std::numeric_limits<double>::quiet_NaN();
    out->seconds = row.seconds;
  });
}

hjs_status hjs_study_render(const hjs_study* study, hjs_format format, char** out) {
  return guarded([&] {
    require(study != nullptr && out != nullptr, "null argument");
    switch (format) {
      case HJS_FORMAT_MARKDOWN:
        *out = copy_string(hjsort::render_markdown(study->result));
        return;
      case HJS_FORMAT_CSV:
        *out = copy_string(hjsort::render_csv(study->result));
        return;
      case HJS_FORMAT_JSON:
        *out = copy_string(hjsort::render_json(study->result));
        return;
    }
    throw hjsort::Error(hjsort::ErrorCode::kInvalidArgument, "unknown output format");
  });
}

void hjs_string_free(char* text) { delete[] text; }

hjs_status hjs_cloud_create(int n, const double* coords, size_t count, hjs_cloud** out) {
  return guarded([&] {
    require(out != nullptr && (coords != nullptr || count == 0), "null argument");
    std::vector<double> data(coords, coords + count * static_cast<size_t>(std::max(n, 0)));
    *out = new hjs_cloud{hjsort::PointCloud(n, std::move(data))};
  });
}

hjs_status hjs_cloud_load_csv(const char* path, int normalize, hjs_cloud** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto cloud = hjsort::read_cloud_csv(path);
    *out = new hjs_cloud{normalize ? cloud.normalized() : std::move(cloud)};
  });
}

void hjs_cloud_destroy(hjs_cloud* cloud) { delete cloud; }
int hjs_cloud_dim(const hjs_cloud* cloud) { return cloud ? cloud->cloud.dim() : 0; }
size_t hjs_cloud_size(const hjs_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }
const double* hjs_cloud_data(const hjs_cloud* cloud) { return cloud ? cloud->cloud.coords().data() : nullptr; }

hjs_status hjs_pareto_fronts(const hjs_cloud* cloud, int64_t* labels) {
  return guarded([&] {
    require(cloud != nullptr && (labels != nullptr || cloud->cloud.empty()), "null argument");
    const auto fronts = hjsort::pareto_fronts(cloud->cloud);
    std::copy(fronts.begin(), fronts.end(), labels);
  });
}

hjs_status hjs_pde_rank(const hjs_cloud* cloud, const hjs_field* u_field, double* ranks) {
  return guarded([&] {
    require(cloud != nullptr && u_field != nullptr && (ranks != nullptr || cloud->cloud.empty()), "null argument");
    const auto r = hjsort::pde_rank(cloud->cloud, u_field->field);
    std::copy(r.begin(), r.end(), ranks);
  });
}

hjs_status hjs_rank_agreement(const int64_t* labels, const double* ranks, size_t count, double* out) {
  return guarded([&] {
    require(out != nullptr && ((labels != nullptr && ranks != nullptr) || count == 0), "null argument");
    *out = hjsort::rank_agreement(std::span<const std::int64_t>(labels, count), std::span<const double>(ranks, count));
  });
}

hjs_status hjs_cloud_save_csv(const hjs_cloud* cloud, const int64_t* labels, const double* ranks, const char* path) {
  return guarded([&] {
    require(cloud != nullptr && labels != nullptr && path != nullptr, "null argument");
    const size_t n = cloud->cloud.size();
    hjsort::write_cloud_csv(cloud->cloud, std::span<const std::int64_t>(labels, n),
                            ranks ? std::span<const double>(ranks, n) : std::span<const double>(), path);
  });
}

}  // extern "C"
