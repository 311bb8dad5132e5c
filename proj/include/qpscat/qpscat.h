/* C interface to the qpscat library.
 *
 * Every function returns a qps_status. On failure the calling thread's last
 * error (message and a JSON object {"error", "message", "detail"}) is set
 * and stays valid until the next failing call on that thread. Strings handed
 * out through char** parameters are owned by the caller and released with
 * qps_string_free. */
#ifndef QPSCAT_H
#define QPSCAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(QPSCAT_BUILDING_LIBRARY)
#define QPS_API __attribute__((visibility("default")))
#else
#define QPS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qps_status {
  QPS_OK = 0,
  QPS_ERR_INVALID_ARGUMENT = 1,
  QPS_ERR_NON_POSITIVE_WAVE_NUMBER = 2,
  QPS_ERR_WOOD_ANOMALY_PROXIMITY = 3,
  QPS_ERR_BAD_GEOMETRY = 4,
  QPS_ERR_TOO_CLOSE_VERTICALLY = 5,
  QPS_ERR_SINGULAR_POINT = 6,
  QPS_ERR_PARSE = 7,
  QPS_ERR_VALIDATION = 8,
  QPS_ERR_SOURCE_INSIDE_SLAB = 9,
  QPS_ERR_SOLVER_DIVERGED = 10,
  QPS_ERR_RESONANT_DISCRETIZATION = 11,
  QPS_ERR_ALIASED_MODE = 12,
  QPS_ERR_LOSSY_SCENE = 13,
  QPS_ERR_EMPTY_SCENE = 14,
  QPS_ERR_MISSING_INPUT = 15,
  QPS_ERR_IO = 16,
  QPS_ERR_INTERNAL = 99
} qps_status;

typedef enum qps_method { QPS_METHOD_PROPOSED = 0, QPS_METHOD_OSM = 1 } qps_method;

typedef struct qps_params qps_params;
typedef struct qps_scene qps_scene;
typedef struct qps_rayleigh qps_rayleigh;
typedef struct qps_map qps_map;

/* Called after each finished source solve. */
typedef void (*qps_progress_fn)(size_t done, size_t total, void* user);

QPS_API const char* qps_version(void);
QPS_API const char* qps_status_name(qps_status status);
QPS_API const char* qps_last_error_message(void);
QPS_API const char* qps_last_error_json(void);
QPS_API void qps_string_free(char* s);

/* Medium parameters. */
QPS_API qps_status qps_params_create(double k, double alpha, double h, double r_meas, qps_params** out);
QPS_API void qps_params_destroy(qps_params* p);
/* Writes up to `cap` propagating indices; *count receives the full count. */
QPS_API qps_status qps_params_propagating(const qps_params* p, int* out, size_t cap, size_t* count);
QPS_API qps_status qps_params_beta(const qps_params* p, int j, double* re, double* im);
QPS_API qps_status qps_green_modal(const qps_params* p, double x1, double x2, double y1, double y2, double* re,
                                   double* im);
QPS_API qps_status qps_kernel_f_modal(const qps_params* p, double z1, double z2, double y1, double y2, double* re,
                                      double* im);

/* Scenes. */
QPS_API qps_status qps_scene_parse(const char* text, qps_scene** out);
QPS_API qps_status qps_scene_load(const char* path, qps_scene** out);
QPS_API void qps_scene_destroy(qps_scene* s);
QPS_API qps_status qps_scene_params(const qps_scene* s, qps_params** out);
QPS_API qps_status qps_scene_contains(const qps_scene* s, double x1, double x2, int* inside);

/* Rayleigh data. */
QPS_API qps_status qps_rayleigh_load(const char* path, qps_rayleigh** out);
QPS_API void qps_rayleigh_destroy(qps_rayleigh* r);
QPS_API qps_status qps_rayleigh_n_sources(const qps_rayleigh* r, size_t* n);
/* coeff = {re u+, im u+, re u-, im u-} */
QPS_API qps_status qps_rayleigh_coeff(const qps_rayleigh* r, size_t source, int j, double coeff[4]);

/* Indicator maps over (-pi, pi) x (-min(h, 1), min(h, 1)). */
QPS_API qps_status qps_map_compute(const qps_rayleigh* r, qps_method method, int p, int n1, int n2, qps_map** out);
QPS_API void qps_map_destroy(qps_map* m);
/* Raw values, x2-major (index = i2 * n1 + i1); the pointer lives as long as the map. */
QPS_API qps_status qps_map_values(const qps_map* m, const double** values, int* n1, int* n2, double* max_value);

/* File-level pipeline steps. */
typedef struct qps_forward_options {
  const char* config_path;
  int n_sources;
  int n1;
  int n2;
  const char* out_dir;
  unsigned threads; /* 0 = hardware concurrency */
} qps_forward_options;

typedef struct qps_image_options {
  const char* data_dir;
  qps_method method;
  int p;
  int n1;
  int n2;
  const char* out_dir;
} qps_image_options;

QPS_API qps_status qps_run_forward(const qps_forward_options* opts, qps_progress_fn progress, void* user,
                                   char** manifest_json);
QPS_API qps_status qps_run_noise(const char* data_dir, double delta, uint64_t seed, const char* out_dir,
                                 double* achieved_delta);
QPS_API qps_status qps_run_image(const qps_image_options* opts, char** metrics_json);
QPS_API qps_status qps_run_kernel(double k, double alpha, int n1, int n2, const char* out_dir, char** meta_json);
QPS_API qps_status qps_run_pipeline(const qps_forward_options* fwd, double delta, uint64_t seed, qps_method method,
                                    int p, int map_n1, int map_n2, qps_progress_fn progress, void* user,
                                    char** metrics_json);
/* *passed is 1 iff every check of the suite passed. */
QPS_API qps_status qps_run_verify(const char* suite, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif
