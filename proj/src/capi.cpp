#include "qpscat/qpscat.h"

#include "qpscat/io.hpp"
#include "qpscat/pipeline.hpp"
#include "qpscat/quasi_greens.hpp"
#include "qpscat/verify.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>

struct qps_params {
  qpscat::MediumParams p;
};
struct qps_scene {
  qpscat::Scene s;
};
struct qps_rayleigh {
  qpscat::RayleighData d;
};
struct qps_map {
  qpscat::IndicatorMap m;
};

namespace {

thread_local std::string g_message;
thread_local std::string g_json;

qps_status to_status(qpscat::ErrorCode c) { return static_cast<qps_status>(static_cast<int>(c) + 1); }

qps_status fail(qps_status st, const std::string& message, const std::string& json) {
  g_message = message;
  g_json = json;
  return st;
}

// Runs `body`, converting every exception into a status and the thread's last error.
template <class F>
qps_status guarded(F&& body) {
  try {
    body();
    return QPS_OK;
  } catch (const qpscat::Error& e) {
    return fail(to_status(e.code()), e.what(), qpscat::error_json(e));
  } catch (const std::bad_alloc&) {
    return fail(QPS_ERR_INTERNAL, "out of memory", R"({"error":"Internal","message":"out of memory"})");
  } catch (const std::exception& e) {
    nlohmann::json j = {{"error", "Internal"}, {"message", e.what()}};
    return fail(QPS_ERR_INTERNAL, e.what(), j.dump());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) throw qpscat::Error(qpscat::ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

std::string str_or_empty(const char* s) { return s ? std::string(s) : std::string(); }

qpscat::IndicatorMethod to_method(qps_method m) {
  if (m == QPS_METHOD_PROPOSED) return qpscat::IndicatorMethod::kProposed;
  if (m == QPS_METHOD_OSM) return qpscat::IndicatorMethod::kOsm;
  throw qpscat::Error(qpscat::ErrorCode::kInvalidArgument, "unknown indicator method");
}

qpscat::ProgressFn wrap_progress(qps_progress_fn fn, void* user) {
  if (!fn) return {};
  return [fn, user](std::size_t done, std::size_t total) { fn(done, total, user); };
}

qpscat::ForwardRunOptions to_forward(const qps_forward_options* o) {
  need(o, "forward options");
  qpscat::ForwardRunOptions f;
  f.scene_path = str_or_empty(o->config_path);
  if (f.scene_path.empty()) throw qpscat::Error(qpscat::ErrorCode::kMissingInput, "no scene configuration given");
  f.n_sources = o->n_sources;
  f.n1 = o->n1;
  f.n2 = o->n2;
  f.out_dir = str_or_empty(o->out_dir);
  f.threads = o->threads;
  return f;
}

std::string metrics_text(const qpscat::ImageRunResult& res) {
  nlohmann::json j = {{"argmax_error", nullptr}, {"jaccard", nullptr}, {"contrast_ratio", nullptr},
                      {"max_raw", res.map.max_value}};
  if (res.has_metrics) {
    j["argmax_error"] = res.metrics.argmax_error;
    j["jaccard"] = res.metrics.jaccard;
    j["contrast_ratio"] = res.metrics.contrast_ratio;
  }
  return j.dump();
}

}  // namespace

extern "C" {

const char* qps_version(void) { return qpscat::kToolVersion; }

const char* qps_status_name(qps_status status) {
  if (status == QPS_OK) return "Ok";
  if (status == QPS_ERR_INTERNAL) return "Internal";
  const int c = static_cast<int>(status) - 1;
  if (c < 0 || c > static_cast<int>(qpscat::ErrorCode::kIoError)) return "Unknown";
  return qpscat::error_code_name(static_cast<qpscat::ErrorCode>(c));
}

const char* qps_last_error_message(void) { return g_message.c_str(); }
const char* qps_last_error_json(void) { return g_json.c_str(); }
void qps_string_free(char* s) { std::free(s); }

qps_status qps_params_create(double k, double alpha, double h, double r_meas, qps_params** out) {
  return guarded([&] {
    need(out, "out");
    *out = new qps_params{qpscat::make_params(k, alpha, h, r_meas)};
  });
}

void qps_params_destroy(qps_params* p) { delete p; }

qps_status qps_params_propagating(const qps_params* p, int* out, size_t cap, size_t* count) {
  return guarded([&] {
    need(p, "params");
    need(count, "count");
    const auto prop = p->p.propagating_set();
    *count = prop.size();
    if (out) {
      for (std::size_t i = 0; i < prop.size() && i < cap; ++i) out[i] = prop[i];
    }
  });
}

qps_status qps_params_beta(const qps_params* p, int j, double* re, double* im) {
  return guarded([&] {
    need(p, "params");
    need(re, "re");
    need(im, "im");
    const auto b = p->p.mode(j).beta_j;
    *re = b.real();
    *im = b.imag();
  });
}

qps_status qps_green_modal(const qps_params* p, double x1, double x2, double y1, double y2, double* re, double* im) {
  return guarded([&] {
    need(p, "params");
    need(re, "re");
    need(im, "im");
    const auto g = qpscat::green_modal({x1, x2}, {y1, y2}, p->p).value;
    *re = g.real();
    *im = g.imag();
  });
}

qps_status qps_kernel_f_modal(const qps_params* p, double z1, double z2, double y1, double y2, double* re,
                              double* im) {
  return guarded([&] {
    need(p, "params");
    need(re, "re");
    need(im, "im");
    const auto f = qpscat::kernel_F_modal({z1, z2}, {y1, y2}, p->p);
    *re = f.real();
    *im = f.imag();
  });
}

qps_status qps_scene_parse(const char* text, qps_scene** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new qps_scene{qpscat::parse_scene(text)};
  });
}

qps_status qps_scene_load(const char* path, qps_scene** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new qps_scene{qpscat::load_scene_file(path)};
  });
}

void qps_scene_destroy(qps_scene* s) { delete s; }

qps_status qps_scene_params(const qps_scene* s, qps_params** out) {
  return guarded([&] {
    need(s, "scene");
    need(out, "out");
    *out = new qps_params{s->s.params()};
  });
}

qps_status qps_scene_contains(const qps_scene* s, double x1, double x2, int* inside) {
  return guarded([&] {
    need(s, "scene");
    need(inside, "inside");
    *inside = qpscat::contrast_at(s->s, {x1, x2}) != qpscat::cplx{0.0, 0.0} ? 1 : 0;
  });
}

qps_status qps_rayleigh_load(const char* path, qps_rayleigh** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new qps_rayleigh{qpscat::io::parse_rayleigh_csv(qpscat::io::read_file(path))};
  });
}

void qps_rayleigh_destroy(qps_rayleigh* r) { delete r; }

qps_status qps_rayleigh_n_sources(const qps_rayleigh* r, size_t* n) {
  return guarded([&] {
    need(r, "data");
    need(n, "n");
    *n = r->d.n_sources();
  });
}

qps_status qps_rayleigh_coeff(const qps_rayleigh* r, size_t source, int j, double coeff[4]) {
  return guarded([&] {
    need(r, "data");
    need(coeff, "coeff");
    if (source >= r->d.n_sources()) throw qpscat::Error(qpscat::ErrorCode::kInvalidArgument, "source out of range");
    if (!r->d.in_window(j)) throw qpscat::Error(qpscat::ErrorCode::kInvalidArgument, "mode outside stored window");
    const auto& c = r->d.coeff(source, j);
    coeff[0] = c.plus.real();
    coeff[1] = c.plus.imag();
    coeff[2] = c.minus.real();
    coeff[3] = c.minus.imag();
  });
}

qps_status qps_map_compute(const qps_rayleigh* r, qps_method method, int p, int n1, int n2, qps_map** out) {
  return guarded([&] {
    need(r, "data");
    need(out, "out");
    if (n1 < 1 || n2 < 1) throw qpscat::Error(qpscat::ErrorCode::kInvalidArgument, "grid dimensions must be positive");
    qpscat::ImagingConfig cfg;
    cfg.p = p;
    cfg.method = to_method(method);
    const double top = std::min(1.0, r->d.params().h());
    cfg.grid = qpscat::Grid2D(-qpscat::kPi, qpscat::kPi, -top, top, n1, n2);
    *out = new qps_map{qpscat::indicator_map(r->d, cfg)};
  });
}

void qps_map_destroy(qps_map* m) { delete m; }

qps_status qps_map_values(const qps_map* m, const double** values, int* n1, int* n2, double* max_value) {
  return guarded([&] {
    need(m, "map");
    if (values) *values = m->m.values.data();
    if (n1) *n1 = m->m.grid.n1();
    if (n2) *n2 = m->m.grid.n2();
    if (max_value) *max_value = m->m.max_value;
  });
}

qps_status qps_run_forward(const qps_forward_options* opts, qps_progress_fn progress, void* user,
                           char** manifest_json) {
  return guarded([&] {
    const auto m = qpscat::run_forward(to_forward(opts), wrap_progress(progress, user));
    if (manifest_json) *manifest_json = dup_string(m.to_json());
  });
}

qps_status qps_run_noise(const char* data_dir, double delta, uint64_t seed, const char* out_dir,
                         double* achieved_delta) {
  return guarded([&] {
    const auto r = qpscat::run_noise(str_or_empty(data_dir), delta, seed, str_or_empty(out_dir));
    if (achieved_delta) *achieved_delta = r.achieved_delta;
  });
}

qps_status qps_run_image(const qps_image_options* opts, char** metrics_json) {
  return guarded([&] {
    need(opts, "image options");
    qpscat::ImageRunOptions o;
    o.data_dir = str_or_empty(opts->data_dir);
    o.method = to_method(opts->method);
    o.p = opts->p;
    o.n1 = opts->n1;
    o.n2 = opts->n2;
    o.out_dir = str_or_empty(opts->out_dir);
    const auto res = qpscat::run_image(o);
    if (metrics_json) *metrics_json = dup_string(metrics_text(res));
  });
}

qps_status qps_run_kernel(double k, double alpha, int n1, int n2, const char* out_dir, char** meta_json) {
  return guarded([&] {
    qpscat::KernelRunOptions o;
    o.k = k;
    o.alpha = alpha;
    if (n1 > 0) o.n1 = n1;
    if (n2 > 0) o.n2 = n2;
    o.out_dir = str_or_empty(out_dir);
    const auto panel = qpscat::run_kernel(o);
    if (meta_json) {
      nlohmann::json j = {{"peak_value", panel.peak_value},
                          {"peak_at", {panel.peak_at.x1, panel.peak_at.x2}},
                          {"max_on_unit_circle", panel.max_on_unit_circle}};
      *meta_json = dup_string(j.dump());
    }
  });
}

qps_status qps_run_pipeline(const qps_forward_options* fwd, double delta, uint64_t seed, qps_method method, int p,
                            int map_n1, int map_n2, qps_progress_fn progress, void* user, char** metrics_json) {
  return guarded([&] {
    qpscat::PipelineRunOptions o;
    o.forward = to_forward(fwd);
    o.out_dir = o.forward.out_dir;
    o.delta = delta;
    o.seed = seed;
    o.method = to_method(method);
    o.p = p;
    o.map_n1 = map_n1;
    o.map_n2 = map_n2;
    const auto res = qpscat::run_pipeline(o, wrap_progress(progress, user));
    if (metrics_json) *metrics_json = dup_string(metrics_text(res));
  });
}

qps_status qps_run_verify(const char* suite, char** report_json, int* passed) {
  return guarded([&] {
    need(suite, "suite");
    const auto rep = qpscat::run_verify(suite);
    if (report_json) *report_json = dup_string(rep.to_json());
    if (passed) *passed = rep.pass() ? 1 : 0;
  });
}

}  // extern "C"
