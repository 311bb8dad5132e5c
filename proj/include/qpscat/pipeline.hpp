// File-level pipeline steps behind the command line tool:
// scene -> forward data -> noise -> indicator maps, plus kernel heatmaps.
#pragma once

#include "qpscat/forward.hpp"
#include "qpscat/imaging.hpp"
#include "qpscat/noise.hpp"
#include "qpscat/scatterers.hpp"

#include <cstdint>
#include <string>

namespace qpscat {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr double kSourceHeight = 3.0;
inline constexpr int kTracePoints = 64;

// Names of the files written into output directories.
inline constexpr const char* kRayleighFile = "rayleigh.csv";
inline constexpr const char* kTraceFile = "traces.csv";
inline constexpr const char* kSceneFile = "scene.cfg";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kNoiseMetaFile = "noise_meta.json";
inline constexpr const char* kMapCsvFile = "indicator.csv";
inline constexpr const char* kMapPgmFile = "indicator.pgm";
inline constexpr const char* kMetricsFile = "metrics.json";

struct RunManifest {
  std::string scene_path;
  std::string scene_text;
  int n_sources = 0;
  double source_height = kSourceHeight;
  int solver_n1 = 256;
  int solver_n2 = 256;
  int trace_points = kTracePoints;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::string method = "proposed";
  int p = 4;
  int map_n1 = 128;
  int map_n2 = 96;
  std::string out_dir;
  std::string version = kToolVersion;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

struct ForwardRunOptions {
  std::string scene_path;
  int n_sources = 2;
  int n1 = 256;
  int n2 = 256;
  std::string out_dir;
  unsigned threads = 0;
};

/// Solves one problem per source, measures u_sc on Gamma_{+-r_meas} with 64
/// points per line and writes the Rayleigh coefficients recovered from
/// those traces together with the traces, scene copy and manifest.
RunManifest run_forward(const ForwardRunOptions& opts, const ProgressFn& progress = {});

struct NoiseRunResult {
  double achieved_delta = 0.0;
};
NoiseRunResult run_noise(const std::string& data_dir, double delta, std::uint64_t seed, const std::string& out_dir);

struct ImageRunOptions {
  std::string data_dir;
  IndicatorMethod method = IndicatorMethod::kProposed;
  int p = 4;
  int n1 = 128;
  int n2 = 96;
  std::string out_dir;
  double threshold = 0.5;
};

struct ImageRunResult {
  IndicatorMap map;
  bool has_metrics = false;
  ReconstructionMetrics metrics;
};
ImageRunResult run_image(const ImageRunOptions& opts);

struct KernelRunOptions {
  double k = kTwoPi;
  double alpha = 0.0;
  std::string out_dir;
  int n1 = 127;
  int n2 = 121;
  int image_trunc = 500;
};

struct KernelPanel {
  Grid2D grid;                 // over (-pi, pi) x (-3, 3); y = (0, 0)
  std::vector<double> j0_abs;  // |J0(k |z - y|)|
  std::vector<double> full_abs;  // |J0(k |z - y|) + w_alpha(z, y)|
  double peak_value = 0.0;     // of full_abs
  Point peak_at;
  double max_on_unit_circle = 0.0;  // max of full_abs over |z - y| = 1
};

/// Kernel heatmaps from the J0 image series. y sits at the origin.
KernelPanel kernel_panel(const MediumParams& params, int n1, int n2, int image_trunc);
KernelPanel run_kernel(const KernelRunOptions& opts);

struct PipelineRunOptions {
  ForwardRunOptions forward;
  double delta = 0.0;
  std::uint64_t seed = 0;
  IndicatorMethod method = IndicatorMethod::kProposed;
  int p = 4;
  int map_n1 = 128;
  int map_n2 = 96;
  std::string out_dir;  // receives forward/, noisy/ and image/
};

/// forward -> noise -> image with each stage in its own subdirectory.
ImageRunResult run_pipeline(const PipelineRunOptions& opts, const ProgressFn& progress = {});

/// Every error surfaced by pipeline steps as a JSON object
/// {"error": <code name>, "message": ..., ...detail}.
std::string error_json(const Error& e);

}  // namespace qpscat
