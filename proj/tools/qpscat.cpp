// qpscat command line tool. Talks to the library only through qpscat.h.
#include "qpscat/qpscat.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kMissingInput = 3, kRuntimeError = 4 };

int exit_code(qps_status st) {
  switch (st) {
    case QPS_OK:
      return kOk;
    case QPS_ERR_INVALID_ARGUMENT:
    case QPS_ERR_NON_POSITIVE_WAVE_NUMBER:
    case QPS_ERR_WOOD_ANOMALY_PROXIMITY:
    case QPS_ERR_BAD_GEOMETRY:
    case QPS_ERR_PARSE:
    case QPS_ERR_VALIDATION:
    case QPS_ERR_SOURCE_INSIDE_SLAB:
      return kConfigError;
    case QPS_ERR_MISSING_INPUT:
      return kMissingInput;
    default:
      return kRuntimeError;
  }
}

int report(qps_status st) {
  if (st != QPS_OK) std::fprintf(stderr, "%s\n", qps_last_error_json());
  return exit_code(st);
}

// Prints a JSON error for problems found before reaching the library.
int usage_error(const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    if (c == '\n') {
      escaped += "\\n";
      continue;
    }
    escaped += c;
  }
  std::fprintf(stderr, "{\"error\":\"InvalidArgument\",\"message\":\"%s\"}\n", escaped.c_str());
  return kConfigError;
}

bool parse_grid(const std::string& text, int& n1, int& n2) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) return false;
  try {
    std::size_t used1 = 0;
    std::size_t used2 = 0;
    const std::string a = text.substr(0, x);
    const std::string b = text.substr(x + 1);
    n1 = std::stoi(a, &used1);
    n2 = std::stoi(b, &used2);
    return used1 == a.size() && used2 == b.size() && n1 > 0 && n2 > 0;
  } catch (const std::exception&) {
    return false;
  }
}

void print_and_free(char* s) {
  if (!s) return;
  std::fputs(s, stdout);
  const std::size_t n = std::char_traits<char>::length(s);
  if (n == 0 || s[n - 1] != '\n') std::fputc('\n', stdout);
  qps_string_free(s);
}

void progress(size_t done, size_t total, void*) {
  std::fprintf(stderr, "source %zu/%zu solved\n", done, total);
}

qps_method to_method(const std::string& m) { return m == "osm" ? QPS_METHOD_OSM : QPS_METHOD_PROPOSED; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-method imaging of periodic media from quasi-periodic Rayleigh data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qps_version()));

  std::string config;
  std::string out;
  std::string data_dir;
  std::string grid;
  std::string map_grid = "128x96";
  std::string method = "proposed";
  std::string suite;
  int n_sources = 2;
  int p = 4;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double k = 6.283185307179586;
  double alpha = 0.0;
  unsigned threads = 0;
  bool quiet = false;

  auto* fwd = app.add_subcommand("forward", "Solve one scattering problem per source and write Rayleigh data");
  fwd->add_option("--config", config, "Scene configuration file")->required();
  fwd->add_option("--n-sources", n_sources, "Number of point sources (even, >= 2)")->capture_default_str();
  fwd->add_option("--grid", grid, "Solver grid N1xN2 (default 256x256)");
  fwd->add_option("--out", out, "Output directory")->required();
  fwd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  fwd->add_flag("--quiet", quiet, "No progress output");

  auto* noise = app.add_subcommand("noise", "Perturb propagating Rayleigh coefficients");
  noise->add_option("data", data_dir, "Directory holding rayleigh.csv")->required();
  noise->add_option("--delta", delta, "Relative noise level in [0, 1)")->required();
  noise->add_option("--seed", seed, "Random seed")->capture_default_str();
  noise->add_option("--out", out, "Output directory")->required();

  auto* image = app.add_subcommand("image", "Evaluate an indicator map and reconstruction metrics");
  image->add_option("data", data_dir, "Directory holding rayleigh.csv")->required();
  image->add_option("--method", method, "proposed | osm")
      ->check(CLI::IsMember({"proposed", "osm"}))
      ->capture_default_str();
  image->add_option("--p", p, "Indicator exponent (>= 1)")->capture_default_str();
  image->add_option("--grid", map_grid, "Sampling grid N1xN2")->capture_default_str();
  image->add_option("--out", out, "Output directory")->required();

  auto* kernel = app.add_subcommand("kernel", "Heatmaps of |J0| and |J0 + w_alpha| around y = 0");
  kernel->add_option("--k", k, "Wave number")->capture_default_str();
  kernel->add_option("--alpha", alpha, "Quasi-periodicity parameter")->capture_default_str();
  kernel->add_option("--grid", grid, "Heatmap grid N1xN2 (default 127x121; odd sizes put a node on y)");
  kernel->add_option("--out", out, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Run a self-check battery and print a JSON report");
  verify->add_option("suite", suite, "modes | greens | theorem1 | stability | energy | consistency | all")
      ->required()
      ->check(CLI::IsMember({"modes", "greens", "theorem1", "stability", "energy", "consistency", "all"}));

  auto* pipe = app.add_subcommand("pipeline", "forward, noise and image in one run");
  pipe->add_option("--config", config, "Scene configuration file")->required();
  pipe->add_option("--n-sources", n_sources, "Number of point sources (even, >= 2)")->capture_default_str();
  pipe->add_option("--grid", grid, "Solver grid N1xN2 (default 256x256)");
  pipe->add_option("--map-grid", map_grid, "Sampling grid N1xN2")->capture_default_str();
  pipe->add_option("--delta", delta, "Relative noise level in [0, 1)")->capture_default_str();
  pipe->add_option("--seed", seed, "Random seed")->capture_default_str();
  pipe->add_option("--method", method, "proposed | osm")
      ->check(CLI::IsMember({"proposed", "osm"}))
      ->capture_default_str();
  pipe->add_option("--p", p, "Indicator exponent (>= 1)")->capture_default_str();
  pipe->add_option("--out", out, "Output directory")->required();
  pipe->add_option("--threads", threads, "Worker threads (0 = all cores)");
  pipe->add_flag("--quiet", quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  int n1 = 256;
  int n2 = 256;
  if (!grid.empty() && !parse_grid(grid, n1, n2)) return usage_error("bad --grid '" + grid + "', expected N1xN2");
  int m1 = 128;
  int m2 = 96;
  if (!parse_grid(map_grid, m1, m2)) return usage_error("bad grid '" + map_grid + "', expected N1xN2");
  const qps_progress_fn cb = quiet ? nullptr : progress;

  if (*fwd) {
    const qps_forward_options o{config.c_str(), n_sources, n1, n2, out.c_str(), threads};
    char* manifest = nullptr;
    const qps_status st = qps_run_forward(&o, cb, nullptr, &manifest);
    print_and_free(manifest);
    return report(st);
  }
  if (*noise) {
    double achieved = 0.0;
    const qps_status st = qps_run_noise(data_dir.c_str(), delta, seed, out.c_str(), &achieved);
    if (st == QPS_OK) std::printf("{\"delta\": %.17g, \"seed\": %llu, \"achieved_delta\": %.17g}\n", delta,
                                  static_cast<unsigned long long>(seed), achieved);
    return report(st);
  }
  if (*image) {
    const qps_image_options o{data_dir.c_str(), to_method(method), p, m1, m2, out.c_str()};
    char* metrics = nullptr;
    const qps_status st = qps_run_image(&o, &metrics);
    print_and_free(metrics);
    return report(st);
  }
  if (*kernel) {
    char* meta = nullptr;
    const qps_status st = qps_run_kernel(k, alpha, grid.empty() ? 0 : n1, grid.empty() ? 0 : n2, out.c_str(), &meta);
    print_and_free(meta);
    return report(st);
  }
  if (*verify) {
    const std::vector<std::string> all{"modes", "greens", "theorem1", "stability", "energy", "consistency"};
    const std::vector<std::string> suites = suite == "all" ? all : std::vector<std::string>{suite};
    bool ok = true;
    for (const auto& s : suites) {
      char* rep = nullptr;
      int passed = 0;
      const qps_status st = qps_run_verify(s.c_str(), &rep, &passed);
      print_and_free(rep);
      if (st != QPS_OK) return report(st);
      ok = ok && passed;
    }
    return ok ? kOk : kVerifyFailed;
  }
  if (*pipe) {
    const qps_forward_options o{config.c_str(), n_sources, n1, n2, out.c_str(), threads};
    char* metrics = nullptr;
    const qps_status st = qps_run_pipeline(&o, delta, seed, to_method(method), p, m1, m2, cb, nullptr, &metrics);
    print_and_free(metrics);
    return report(st);
  }
  return kOk;
}
