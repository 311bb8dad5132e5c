// Sampling indicators built from propagating Rayleigh coefficients.
//
// For a sampling point z and source l the inner sum is
//
//   S_l(z) = sum_{j propagating} w_j (u_j^+(l) conj(g_j^+(z)) + u_j^-(l) conj(g_j^-(z))),
//
// with w_j = beta_j for the proposed indicator and w_j = 1 for the modal
// orthogonality-sampling indicator; I(z) = sum_l |S_l(z)|^p.
#pragma once

#include "qpscat/core.hpp"
#include "qpscat/scatterers.hpp"

#include <string>
#include <vector>

namespace qpscat {

enum class IndicatorMethod { kProposed, kOsm };

const char* method_name(IndicatorMethod m);
IndicatorMethod parse_method(const std::string& name);

struct ImagingConfig {
  int p = 4;
  Grid2D grid{-kPi, kPi, -1.0, 1.0, 128, 96};
  IndicatorMethod method = IndicatorMethod::kProposed;
  unsigned threads = 0;
};

struct IndicatorMap {
  Grid2D grid;
  std::vector<double> values;  // raw I(z), x2-major
  double max_value = 0.0;
  IndicatorMethod method = IndicatorMethod::kProposed;
  int p = 4;

  /// values / max_value, or all zeros when the map vanishes.
  std::vector<double> normalized() const;
};

/// Inner modal sum S_l(z) for one source.
cplx indicator_inner_sum(const RayleighData& data, std::size_t source, Point z, IndicatorMethod method);

double indicator_point(const RayleighData& data, Point z, int p);
double indicator_osm_point(const RayleighData& data, Point z, int p);

IndicatorMap indicator_map(const RayleighData& data, const ImagingConfig& cfg);

struct ReconstructionMetrics {
  double argmax_error = 0.0;   // distance from argmax to the nearest support point
  double argmax_x1 = 0.0;
  double argmax_x2 = 0.0;
  double jaccard = 0.0;
  double contrast_ratio = 0.0;
  double max_raw = 0.0;
};

/// Throws EmptyScene when the scene has no support on the map grid.
ReconstructionMetrics metrics(const IndicatorMap& map, const Scene& scene, double threshold_frac = 0.5);

}  // namespace qpscat
