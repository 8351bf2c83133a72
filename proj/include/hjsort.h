/* SPDX-License-Identifier: Apache-2.0 */
/*
 * hjsort: monotone finite-difference solvers for the Hamilton-Jacobi equation
 * (u_{x_1})_+ ... (u_{x_n})_+ = f on [0,1]^n, u = 0 where some x_i = 0,
 * the continuum limit of nondominated sorting, plus discrete Pareto-front
 * sorting and PDE-based ranking of point clouds.
 *
 * Every function returning hjs_status reports failures through the status
 * code; hjs_last_error() then returns a message describing the most recent
 * failure on the calling thread. Objects returned through out-parameters are
 * owned by the caller and released with the matching *_destroy function.
 */
#ifndef HJSORT_H
#define HJSORT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HJS_BUILDING_LIBRARY)
#    define HJS_API __declspec(dllexport)
#  else
#    define HJS_API __declspec(dllimport)
#  endif
#else
#  define HJS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hjs_status {
  HJS_OK = 0,
  HJS_ERR_INVALID_ARGUMENT = 1,
  HJS_ERR_DOMAIN = 2,          /* negative f or neighbour value, etc. */
  HJS_ERR_ITERATION_CAP = 3,   /* bisection failed to converge */
  HJS_ERR_IO = 4,
  HJS_ERR_PARSE = 5,           /* malformed input file */
  HJS_ERR_OUT_OF_RANGE = 6,    /* points outside [0,1]^n */
  HJS_ERR_RESOURCE = 7,        /* allocation failure or size overflow */
  HJS_ERR_INTERNAL = 8
} hjs_status;

typedef enum hjs_scheme {
  HJS_SCHEME_S1 = 1, /* u directly; O(h^(1/n)) near the boundary */
  HJS_SCHEME_S2 = 2, /* v = u^n / n^n */
  HJS_SCHEME_S3 = 3  /* w with u = n (x_1...x_n)^(1/n) w */
} hjs_scheme;

typedef enum hjs_format {
  HJS_FORMAT_MARKDOWN = 0,
  HJS_FORMAT_CSV = 1,
  HJS_FORMAT_JSON = 2
} hjs_format;

typedef struct hjs_field hjs_field;
typedef struct hjs_rhs hjs_rhs;
typedef struct hjs_study hjs_study;
typedef struct hjs_cloud hjs_cloud;

HJS_API const char* hjs_last_error(void);
HJS_API const char* hjs_version(void);
HJS_API const char* hjs_scheme_name(hjs_scheme scheme);

/* ---- grid fields ------------------------------------------------------ */

/* Field over the (m+1)^n nodes of [0,1]^n, last axis fastest. */
HJS_API hjs_status hjs_field_create(int n, int64_t m, const double* values, hjs_field** out);
HJS_API void hjs_field_destroy(hjs_field* field);
HJS_API int hjs_field_dim(const hjs_field* field);
HJS_API int64_t hjs_field_m(const hjs_field* field);
HJS_API int64_t hjs_field_size(const hjs_field* field);
HJS_API const double* hjs_field_data(const hjs_field* field);

/* Binary layout: int64 n, int64 m (little endian), then (m+1)^n doubles. */
HJS_API hjs_status hjs_field_load(const char* path, hjs_field** out);
HJS_API hjs_status hjs_field_save_binary(const hjs_field* field, const char* path);
/* One row per node: coordinates then value, 17 significant digits. */
HJS_API hjs_status hjs_field_save_csv(const hjs_field* field, const char* path);

/* Maps a solved field of the given scheme onto the u scale. */
HJS_API hjs_status hjs_field_to_u(const hjs_field* field, hjs_scheme scheme, hjs_field** out);

/* ---- right-hand sides -------------------------------------------------- */

/* name: "f1", "f2", "f3" or "const:<c>"; k and big_c parameterise f2 and f3. */
HJS_API hjs_status hjs_rhs_from_case(const char* name, double k, double big_c, hjs_rhs** out);
/* Copies the field; it must share the solve grid. */
HJS_API hjs_status hjs_rhs_from_field(const hjs_field* field, hjs_rhs** out);
HJS_API void hjs_rhs_destroy(hjs_rhs* rhs);
/* 1 when the right-hand side carries an exact solution u. */
HJS_API int hjs_rhs_has_exact(const hjs_rhs* rhs);

/* ---- solving ---------------------------------------------------------- */

typedef struct hjs_solve_options {
  int n;
  int64_t m;
  hjs_scheme scheme;
  int force_bisection; /* bisect even where a closed form exists (n = 2) */
  int rolling;         /* keep only a rolling window; no field is returned */
} hjs_solve_options;

typedef struct hjs_solve_report {
  double min_residual_ratio; /* residual / target over non-degenerate nodes */
  double max_residual_ratio;
  int64_t residual_nodes;
  int64_t bisection_nodes;
  int max_iterations;
  double mean_iterations;
  double wall_seconds;
  double linf_error; /* u-scale error vs the exact solution, NaN when none */
} hjs_solve_report;

/* out_field may be NULL; it is left NULL in rolling mode. */
HJS_API hjs_status hjs_solve(const hjs_solve_options* options, const hjs_rhs* rhs, hjs_field** out_field,
                             hjs_solve_report* report);

/* ---- convergence studies ---------------------------------------------- */

/* Default mesh sequence with `rows` entries; count receives the number written. */
HJS_API hjs_status hjs_default_meshes(int n, int rows, int64_t* out, size_t capacity, size_t* count);

typedef struct hjs_study_options {
  int n;
  const int64_t* meshes; /* strictly increasing */
  size_t mesh_count;
  const hjs_scheme* schemes;
  size_t scheme_count;
  const char* case_name;
  double k;
  double big_c;
  int jobs;
  int force_bisection;
  const char* levelset_dir; /* NULL to skip level-set output */
} hjs_study_options;

typedef struct hjs_study_row {
  hjs_scheme scheme;
  int64_t m;
  double h;
  double error;
  double order; /* NaN on the first row of a scheme or when undefined */
  double seconds;
} hjs_study_row;

HJS_API hjs_status hjs_study_run(const hjs_study_options* options, hjs_study** out);
HJS_API void hjs_study_destroy(hjs_study* study);
HJS_API size_t hjs_study_row_count(const hjs_study* study);
HJS_API hjs_status hjs_study_row_at(const hjs_study* study, size_t index, hjs_study_row* out);
/* Rendered text is released with hjs_string_free. */
HJS_API hjs_status hjs_study_render(const hjs_study* study, hjs_format format, char** out);
HJS_API void hjs_string_free(char* text);

/* ---- point clouds and Pareto fronts ------------------------------------ */

HJS_API hjs_status hjs_cloud_create(int n, const double* coords, size_t count, hjs_cloud** out);
/* Parse errors name the offending line. normalize maps each axis onto [0,1]. */
HJS_API hjs_status hjs_cloud_load_csv(const char* path, int normalize, hjs_cloud** out);
HJS_API void hjs_cloud_destroy(hjs_cloud* cloud);
HJS_API int hjs_cloud_dim(const hjs_cloud* cloud);
HJS_API size_t hjs_cloud_size(const hjs_cloud* cloud);
HJS_API const double* hjs_cloud_data(const hjs_cloud* cloud);

/* labels must hold hjs_cloud_size() entries; front 1 is nondominated. */
HJS_API hjs_status hjs_pareto_fronts(const hjs_cloud* cloud, int64_t* labels);
/* Multilinear interpolation of a u-scale field at every point. */
HJS_API hjs_status hjs_pde_rank(const hjs_cloud* cloud, const hjs_field* u_field, double* ranks);
HJS_API hjs_status hjs_rank_agreement(const int64_t* labels, const double* ranks, size_t count, double* out);
/* ranks may be NULL to write fronts only. */
HJS_API hjs_status hjs_cloud_save_csv(const hjs_cloud* cloud, const int64_t* labels, const double* ranks,
                                      const char* path);

#ifdef __cplusplus
}
#endif

#endif /* HJSORT_H */
