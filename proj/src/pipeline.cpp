#include "qpscat/pipeline.hpp"

#include "qpscat/io.hpp"
#include "qpscat/quasi_greens.hpp"
#include "qpscat/special.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>

namespace qpscat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void require_dir(const std::string& dir, const char* what) {
  if (dir.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " directory not given");
}

RunManifest read_manifest_or_default(const std::string& dir) {
  const std::string path = join(dir, kManifestFile);
  if (!io::file_exists(path)) return {};
  return RunManifest::from_json(io::read_file(path));
}

Grid2D sampling_grid(const MediumParams& params, int n1, int n2) {
  const double top = std::min(1.0, params.h());
  return Grid2D(-kPi, kPi, -top, top, n1, n2);
}

// Copies one source of trace-derived data into `out` under the given descriptor.
void append_source(RayleighData& out, const RayleighData& one, const SourceDescriptor& desc) {
  const std::size_t slot = out.add_source(desc);
  for (int j = out.j_min(); j <= out.j_max(); ++j) out.coeff(slot, j) = one.coeff(0, j);
}

}  // namespace

std::string RunManifest::to_json() const {
  json j;
  j["version"] = version;
  j["scene_path"] = scene_path;
  j["scene_text"] = scene_text;
  j["n_sources"] = n_sources;
  j["source_layout"] = {{"height", source_height},
                        {"description", "N/2 sources on x2 = +height then N/2 on x2 = -height, cell-centered in x1"}};
  j["solver_grid"] = {solver_n1, solver_n2};
  j["trace_points"] = trace_points;
  j["delta"] = delta;
  j["seed"] = seed;
  j["method"] = method;
  j["p"] = p;
  j["map_grid"] = {map_n1, map_n2};
  j["out_dir"] = out_dir;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("manifest: ") + e.what());
  }
  RunManifest m;
  try {
    m.version = j.value("version", m.version);
    m.scene_path = j.value("scene_path", m.scene_path);
    m.scene_text = j.value("scene_text", m.scene_text);
    m.n_sources = j.value("n_sources", m.n_sources);
    if (j.contains("source_layout")) m.source_height = j["source_layout"].value("height", m.source_height);
    if (j.contains("solver_grid")) {
      m.solver_n1 = j["solver_grid"].at(0).get<int>();
      m.solver_n2 = j["solver_grid"].at(1).get<int>();
    }
    m.trace_points = j.value("trace_points", m.trace_points);
    m.delta = j.value("delta", m.delta);
    m.seed = j.value("seed", m.seed);
    m.method = j.value("method", m.method);
    m.p = j.value("p", m.p);
    if (j.contains("map_grid")) {
      m.map_n1 = j["map_grid"].at(0).get<int>();
      m.map_n2 = j["map_grid"].at(1).get<int>();
    }
    m.out_dir = j.value("out_dir", m.out_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("manifest: ") + e.what());
  }
  return m;
}

RunManifest run_forward(const ForwardRunOptions& opts, const ProgressFn& progress) {
  require_dir(opts.out_dir, "output");
  const std::string scene_text = io::read_file(opts.scene_path);
  const Scene scene = parse_scene(scene_text);
  const MediumParams& params = scene.params();
  const auto positions = source_layout(opts.n_sources, kSourceHeight);
  std::vector<IncidentSpec> incidents;
  incidents.reserve(positions.size());
  for (const Point& s : positions) incidents.emplace_back(PointSource{s});

  SolverConfig cfg;
  cfg.n1 = opts.n1;
  cfg.n2 = opts.n2;
  const RayleighData volume = solve_sources(scene, incidents, cfg, progress, opts.threads);

  // Measurement protocol: u_sc sampled on Gamma_{+-r_meas}, then projected back to modes.
  std::vector<std::pair<int, Trace>> traces;
  std::optional<RayleighData> measured;
  for (std::size_t l = 0; l < volume.n_sources(); ++l) {
    Trace t = synthesize_trace(volume, l, params.r_meas(), kTracePoints);
    const RayleighData one = rayleigh_from_trace(t, params, params.r_meas());
    if (!measured) measured.emplace(params, one.j_min(), one.j_max());
    append_source(*measured, one, volume.sources()[l]);
    traces.emplace_back(volume.sources()[l].id, std::move(t));
  }

  RunManifest m;
  m.scene_path = opts.scene_path;
  m.scene_text = scene_text;
  m.n_sources = opts.n_sources;
  m.solver_n1 = opts.n1;
  m.solver_n2 = opts.n2;
  m.out_dir = opts.out_dir;

  io::write_file_atomic(join(opts.out_dir, kRayleighFile), io::format_rayleigh_csv(*measured));
  io::write_file_atomic(join(opts.out_dir, kTraceFile), io::format_trace_csv(traces));
  io::write_file_atomic(join(opts.out_dir, kSceneFile), scene_text);
  io::write_file_atomic(join(opts.out_dir, kManifestFile), m.to_json());
  return m;
}

NoiseRunResult run_noise(const std::string& data_dir, double delta, std::uint64_t seed, const std::string& out_dir) {
  require_dir(data_dir, "data");
  require_dir(out_dir, "output");
  const RayleighData clean = io::parse_rayleigh_csv(io::read_file(join(data_dir, kRayleighFile)));
  const NoisyData noisy = perturb(clean, NoiseSpec{delta, seed});

  RunManifest m = read_manifest_or_default(data_dir);
  m.delta = delta;
  m.seed = seed;
  m.out_dir = out_dir;

  json meta;
  meta["delta"] = delta;
  meta["seed"] = seed;
  meta["achieved_delta"] = noisy.achieved_delta;

  io::write_file_atomic(join(out_dir, kRayleighFile), io::format_rayleigh_csv(noisy.data));
  io::write_file_atomic(join(out_dir, kNoiseMetaFile), meta.dump(2) + "\n");
  const std::string scene_path = join(data_dir, kSceneFile);
  if (io::file_exists(scene_path)) io::write_file_atomic(join(out_dir, kSceneFile), io::read_file(scene_path));
  io::write_file_atomic(join(out_dir, kManifestFile), m.to_json());
  return {noisy.achieved_delta};
}

ImageRunResult run_image(const ImageRunOptions& opts) {
  require_dir(opts.data_dir, "data");
  require_dir(opts.out_dir, "output");
  const RayleighData data = io::parse_rayleigh_csv(io::read_file(join(opts.data_dir, kRayleighFile)));

  ImagingConfig cfg;
  cfg.p = opts.p;
  cfg.method = opts.method;
  cfg.grid = sampling_grid(data.params(), opts.n1, opts.n2);

  ImageRunResult res;
  res.map = indicator_map(data, cfg);

  json mj = {{"argmax_error", nullptr}, {"jaccard", nullptr}, {"contrast_ratio", nullptr}, {"max_raw", res.map.max_value}};
  const std::string scene_path = join(opts.data_dir, kSceneFile);
  std::string scene_text;
  if (io::file_exists(scene_path)) {
    scene_text = io::read_file(scene_path);
    const Scene scene = parse_scene(scene_text);
    if (!scene.empty()) {
      try {
        res.metrics = metrics(res.map, scene, opts.threshold);
        res.has_metrics = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyScene) throw;
      }
    }
  }
  if (res.has_metrics) {
    mj["argmax_error"] = res.metrics.argmax_error;
    mj["jaccard"] = res.metrics.jaccard;
    mj["contrast_ratio"] = res.metrics.contrast_ratio;  // non-finite values serialize as null
  }
  const Grid2D& g = res.map.grid;
  const auto amax = static_cast<std::size_t>(std::max_element(res.map.values.begin(), res.map.values.end()) -
                                             res.map.values.begin());
  const auto [a1, a2] = g.indices(amax);
  mj["argmax"] = {g.x1(a1), g.x2(a2)};
  mj["threshold"] = opts.threshold;

  RunManifest m = read_manifest_or_default(opts.data_dir);
  m.method = method_name(opts.method);
  m.p = opts.p;
  m.map_n1 = opts.n1;
  m.map_n2 = opts.n2;
  m.out_dir = opts.out_dir;

  io::write_file_atomic(join(opts.out_dir, kMapCsvFile), io::format_map_csv(res.map));
  io::write_file_atomic(join(opts.out_dir, kMapPgmFile), io::format_pgm16(res.map.normalized(), g.n1(), g.n2()));
  io::write_file_atomic(join(opts.out_dir, kMetricsFile), mj.dump(2) + "\n");
  if (!scene_text.empty()) io::write_file_atomic(join(opts.out_dir, kSceneFile), scene_text);
  io::write_file_atomic(join(opts.out_dir, kManifestFile), m.to_json());
  return res;
}

ImageRunResult run_pipeline(const PipelineRunOptions& opts, const ProgressFn& progress) {
  require_dir(opts.out_dir, "output");
  const std::string fwd_dir = join(opts.out_dir, "forward");
  const std::string noisy_dir = join(opts.out_dir, "noisy");
  const std::string image_dir = join(opts.out_dir, "image");
  ForwardRunOptions f = opts.forward;
  f.out_dir = fwd_dir;
  run_forward(f, progress);
  run_noise(fwd_dir, opts.delta, opts.seed, noisy_dir);
  ImageRunOptions im;
  im.data_dir = noisy_dir;
  im.method = opts.method;
  im.p = opts.p;
  im.n1 = opts.map_n1;
  im.n2 = opts.map_n2;
  im.out_dir = image_dir;
  ImageRunResult res = run_image(im);
  io::write_file_atomic(join(opts.out_dir, kManifestFile), io::read_file(join(image_dir, kManifestFile)));
  return res;
}

KernelPanel kernel_panel(const MediumParams& params, int n1, int n2, int image_trunc) {
  KernelPanel out;
  out.grid = Grid2D(-kPi, kPi, -3.0, 3.0, n1, n2);
  const Grid2D& g = out.grid;
  out.j0_abs.assign(g.size(), 0.0);
  out.full_abs.assign(g.size(), 0.0);
  GreensEvalOptions opts;
  opts.image_trunc = image_trunc;
  const Point y{0.0, 0.0};
  // |J0 + w_alpha| is even in x1 (the j and -j images swap into conjugates) and in x2,
  // so one quadrant of a grid symmetric about y is evaluated and mirrored.
  for (int i2 = 0; i2 < (g.n2() + 1) / 2; ++i2) {
    for (int i1 = 0; i1 < (g.n1() + 1) / 2; ++i1) {
      const Point z = g.point(i1, i2);
      const double j0 = std::abs(special::bessel_j0(params.k() * distance(z, y)));
      const double full = 4.0 * std::abs(kernel_F_spatial(z, y, params, opts).value);
      for (int m1 : {i1, g.n1() - 1 - i1}) {
        for (int m2 : {i2, g.n2() - 1 - i2}) {
          out.j0_abs[g.index(m1, m2)] = j0;
          out.full_abs[g.index(m1, m2)] = full;
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::max_element(out.full_abs.begin(), out.full_abs.end()) -
                                             out.full_abs.begin());
  const auto [b1, b2] = g.indices(best);
  out.peak_value = out.full_abs[best];
  out.peak_at = g.point(b1, b2);
  // A quarter circle suffices by the same symmetry.
  constexpr int kArcPoints = 180;
  for (int t = 0; t <= kArcPoints; ++t) {
    const double th = 0.5 * kPi * t / kArcPoints;
    const Point z{std::cos(th), std::sin(th)};
    out.max_on_unit_circle =
        std::max(out.max_on_unit_circle, 4.0 * std::abs(kernel_F_spatial(z, y, params, opts).value));
  }
  return out;
}

KernelPanel run_kernel(const KernelRunOptions& opts) {
  require_dir(opts.out_dir, "output");
  const MediumParams params = make_params(opts.k, opts.alpha, 1.0, 2.0);
  KernelPanel panel = kernel_panel(params, opts.n1, opts.n2, opts.image_trunc);
  const Grid2D& g = panel.grid;
  const std::string extra = io::fmt_double(opts.k) + " " + io::fmt_double(opts.alpha);
  auto normalized = [](const std::vector<double>& v) {
    const double mx = *std::max_element(v.begin(), v.end());
    std::vector<double> out(v.size(), 0.0);
    if (mx > 0.0) {
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / mx;
    }
    return out;
  };
  json meta;
  meta["k"] = opts.k;
  meta["alpha"] = opts.alpha;
  meta["y"] = {0.0, 0.0};
  meta["grid"] = {g.n1(), g.n2()};
  meta["image_trunc"] = opts.image_trunc;
  meta["peak_value"] = panel.peak_value;
  meta["peak_at"] = {panel.peak_at.x1, panel.peak_at.x2};
  meta["max_on_unit_circle"] = panel.max_on_unit_circle;
  meta["j0_peak_value"] = *std::max_element(panel.j0_abs.begin(), panel.j0_abs.end());

  io::write_file_atomic(join(opts.out_dir, "kernel_j0.csv"), io::format_grid_csv(g, panel.j0_abs, "k alpha", extra));
  io::write_file_atomic(join(opts.out_dir, "kernel_j0.pgm"), io::format_pgm16(normalized(panel.j0_abs), g.n1(), g.n2()));
  io::write_file_atomic(join(opts.out_dir, "kernel_full.csv"),
                        io::format_grid_csv(g, panel.full_abs, "k alpha", extra));
  io::write_file_atomic(join(opts.out_dir, "kernel_full.pgm"),
                        io::format_pgm16(normalized(panel.full_abs), g.n1(), g.n2()));
  io::write_file_atomic(join(opts.out_dir, "kernel_meta.json"), meta.dump(2) + "\n");
  return panel;
}

std::string error_json(const Error& e) {
  json j;
  j["error"] = error_code_name(e.code());
  j["message"] = e.what();
  if (!e.detail().empty()) {
    try {
      j["detail"] = json::parse(e.detail());
    } catch (const json::exception&) {
      j["detail"] = e.detail();
    }
  }
  return j.dump();
}

}  // namespace qpscat
