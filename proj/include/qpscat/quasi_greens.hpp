// The alpha-quasiperiodic Helmholtz Green's function
//
//   G(x, y) = (i / 4pi) sum_j exp(i alpha_j (x1 - y1) + i beta_j |x2 - y2|) / beta_j
//           = (i / 4)   sum_j exp(-i 2pi j alpha) H0(k |x - y - (-2pi j, 0)|),
//
// its Rayleigh coefficients g_j^{+-}, and the imaging kernel
// F(x, y) = (G(x, y) - conj(G(y, x))) / 2i in its finite modal form and in its
// J0 image-series form.
#pragma once

#include "qpscat/core.hpp"

#include <utility>

namespace qpscat {

/// How the conditionally convergent image series are summed.
enum class SeriesSummation {
  kPlain,       // symmetric partial sum |j| <= image_trunc
  kCesaro2,     // (C,2) means of the symmetric partial sums
  kSmoothTaper  // unit weight up to image_trunc/2, C-infinity taper to 0 at image_trunc
};

struct GreensEvalOptions {
  /// Max |j| in the modal series. 0 selects it automatically: at least the
  /// stored window, extended until the first dropped term is below 1e-17
  /// relative to 1/(4 pi).
  int modal_trunc = 0;
  int image_trunc = 500;
  SeriesSummation accel = SeriesSummation::kSmoothTaper;
  double x2_switch = 1e-3;
};

struct SeriesValue {
  cplx value;
  /// Modal series: magnitude bound of the dropped tail. Image series:
  /// difference between the summation at image_trunc and at 3/4 of it.
  double error_estimate = 0.0;
};

SeriesValue green_modal(Point x, Point y, const MediumParams& params,
                        const GreensEvalOptions& opts = {});

SeriesValue green_spatial(Point x, Point y, const MediumParams& params,
                          const GreensEvalOptions& opts = {});

/// g_j^{+-}(z) = i / (4 pi beta_j) exp(-i alpha_j z1 -+ i beta_j (z2 -+ h)).
CoeffPair g_coeffs(Point z, int j, const MediumParams& params);

/// F(zt, zs) = 2 pi sum_{j propagating} beta_j (conj g_j^+(zt) g_j^+(zs) + conj g_j^-(zt) g_j^-(zs)).
cplx kernel_F_modal(Point zt, Point zs, const MediumParams& params);

/// F(z, y) = (1/4) sum_j exp(-i 2pi j alpha) J0(k |(z1 - y1 + 2 pi j, z2 - y2)|).
SeriesValue kernel_F_spatial(Point z, Point y, const MediumParams& params,
                             const GreensEvalOptions& opts = {});

/// Only the j = 0 image: J0(k |z - y|) / 4.
double kernel_F_free(Point z, Point y, const MediumParams& params);

/// Weights applied to image |j| = 0..trunc under the given summation rule.
std::vector<double> image_weights(int trunc, SeriesSummation accel);

/// Automatic modal truncation for a vertical separation `dx2` (see GreensEvalOptions).
int auto_modal_trunc(const MediumParams& params, double dx2);

}  // namespace qpscat
