// Direct scattering solver: Lippmann-Schwinger equation
//
//   u = u_in + k^2 Conv_R(q u)   on  (-pi, pi) x (-R, R),  R = 2h + 1/4,
//
// where Conv_R convolves with the quasi-periodic Green's function whose
// vertical profile exp(i beta_j |t|) is cut to |t| <= R and made 2R-periodic.
// Because supp q lies in |x2| < h, the cut never changes the operator on the
// support. In the double Fourier basis exp(i alpha_j x1 + i gamma_m x2),
// gamma_m = pi m / R, the convolution is diagonal with multiplier
//
//   (i / (4 pi beta_j)) * (2pi * 2R) * c_jm,
//   c_jm = i beta_j ((-1)^m exp(i beta_j R) - 1) / (R (gamma_m^2 - beta_j^2)),
//
// c_jm being the Fourier coefficient of the periodized vertical profile.
#pragma once

#include "qpscat/core.hpp"
#include "qpscat/scatterers.hpp"

#include <functional>
#include <variant>

namespace qpscat {

struct PointSource {
  Point s;
};

enum class PlaneDirection { kDown, kUp };

/// exp(i (alpha x1 -+ beta_0 x2)); kDown takes the minus sign.
struct PlaneWave {
  PlaneDirection direction = PlaneDirection::kDown;
};

using IncidentSpec = std::variant<PointSource, PlaneWave>;

struct SolverConfig {
  int n1 = 256;
  int n2 = 256;
  double tol = 1e-10;
  int max_iter = 2000;
  int restart = 80;
  /// Relative proximity |gamma_m^2 + alpha_j^2 - k^2| / k^2 that counts as resonant.
  double resonance_tol = 1e-9;
};

struct ForwardSolution {
  Grid2D grid;             // over (-pi, pi) x (-R, R)
  ComplexField total_field;
  ComplexField incident_field;
  ComplexField contrast;   // rasterized q on `grid`
  IncidentSpec incident;
  double residual = 0.0;
  int iterations = 0;
};

/// Height of the solver box for a medium of half-height h.
double solver_half_height(const MediumParams& params);
Grid2D solver_grid(const MediumParams& params, const SolverConfig& cfg);

/// Fourier multiplier of Conv_R for mode alpha_j and vertical frequency gamma_m = pi m / R.
cplx periodized_multiplier(double k, double alpha_j, int m, double R);
/// Closed-form c_jm (Fourier coefficient of the 2R-periodized exp(i beta |t|)).
cplx periodized_profile_coeff(cplx beta, int m, double R);

/// Samples of the incident field. Point sources need |s2| > h.
ComplexField incident_field(const IncidentSpec& spec, const Grid2D& grid, const MediumParams& params);

/// Throws SolverDiverged or ResonantDiscretization.
ForwardSolution solve_total_field(const Scene& scene, const IncidentSpec& spec, const SolverConfig& cfg = {});

/// u_j^{+-} = k^2 * integral g_j^{+-}(y) q(y) u(y) dy, trapezoidal rule, stored window.
RayleighData rayleigh_from_volume(const ForwardSolution& sol, const Scene& scene);

struct Trace {
  double r = 0.0;
  std::vector<double> x1;  // cell-centered uniform points on (-pi, pi)
  std::vector<cplx> plus;   // u_sc(x1, +r)
  std::vector<cplx> minus;  // u_sc(x1, -r)
};

std::vector<double> trace_points(int n);

/// u_sc on Gamma_{+-r} synthesized from every stored mode of source `source`.
Trace synthesize_trace(const RayleighData& data, std::size_t source, double r, int n_points = 64);
/// u_sc on Gamma_{+-r} from the Rayleigh expansion with every stored mode.
Trace scattered_trace(const ForwardSolution& sol, const Scene& scene, double r, int n_points = 64);
/// u_sc on Gamma_{+-r} by direct quadrature of k^2 * integral G(x, y) q(y) u(y) dy
/// with the modal Green's function; independent of the stored window.
Trace potential_trace(const ForwardSolution& sol, const Scene& scene, double r, int n_points = 64);

/// Discrete Fourier projection of a trace, phase-shifted back to Gamma_{+-h}.
/// Throws AliasedMode when a propagating index does not fit below Nyquist.
RayleighData rayleigh_from_trace(const Trace& trace, const MediumParams& params, double r);

/// |1 - sum_prop (beta_j / beta_0)(|R_j|^2 + |T_j|^2)| for a downward plane
/// wave, with T_0 including the incident amplitude. Throws LossyScene.
double energy_balance(const RayleighData& data, const Scene& scene);

/// N/2 point sources on x2 = +height followed by N/2 on x2 = -height,
/// cell-centered in x1.
std::vector<Point> source_layout(int n_sources, double height = 3.0);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// One Lippmann-Schwinger solve per incident field; results are independent
/// of scheduling. Sources are numbered 0..N-1 in the given order.
RayleighData solve_sources(const Scene& scene, const std::vector<IncidentSpec>& incidents,
                           const SolverConfig& cfg = {}, const ProgressFn& progress = {},
                           unsigned threads = 0);

}  // namespace qpscat
