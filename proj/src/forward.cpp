#include "qpscat/forward.hpp"

#include "qpscat/krylov.hpp"
#include "qpscat/quasi_greens.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <mutex>
#include <sstream>
#include <thread>

namespace qpscat {

namespace {

constexpr cplx kI{0.0, 1.0};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft2 {
 public:
  Fft2(int n1, int n2) : n_(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2)) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_2d(n2, n1, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(n2, n1, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft2() {
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(buf_);
  }
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }

 private:
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

int signed_freq(int idx, int n) { return idx < (n + 1) / 2 ? idx : idx - n; }

// Conv_R on a fixed solver grid.
class PeriodizedConvolution {
 public:
  PeriodizedConvolution(const MediumParams& params, const Grid2D& grid, double R, double resonance_tol)
      : grid_(grid), fft_(grid.n1(), grid.n2()), mult_(grid.size()), phase_(static_cast<std::size_t>(grid.n1())) {
    const int n1 = grid.n1();
    const int n2 = grid.n2();
    const double k = params.k();
    const double norm = 1.0 / static_cast<double>(grid.size());
    for (int i2 = 0; i2 < n2; ++i2) {
      const int m = signed_freq(i2, n2);
      const double gamma = kPi * m / R;
      for (int i1 = 0; i1 < n1; ++i1) {
        const int j = signed_freq(i1, n1);
        const double aj = params.alpha() + j;
        if (std::abs(gamma * gamma + aj * aj - k * k) < resonance_tol * k * k) {
          std::ostringstream msg;
          msg << "discrete frequency (j=" << j << ", m=" << m << ") is resonant with k for R=" << R
              << "; perturb the solver box height (e.g. R*(1+1e-3))";
          throw Error(ErrorCode::kResonantDiscretization, msg.str(),
                      "{\"j\": " + std::to_string(j) + ", \"m\": " + std::to_string(m) + "}");
        }
        mult_[grid.index(i1, i2)] = norm * periodized_multiplier(k, aj, m, R);
      }
    }
    for (int i1 = 0; i1 < n1; ++i1) phase_[static_cast<std::size_t>(i1)] = std::exp(kI * params.alpha() * grid.x1(i1));
  }

  // out = Conv_R(f); f and out may alias.
  void apply(const std::vector<cplx>& f, std::vector<cplx>& out) {
    cplx* b = fft_.data();
    const int n1 = grid_.n1();
    for (std::size_t i = 0; i < f.size(); ++i) b[i] = f[i] * std::conj(phase_[i % static_cast<std::size_t>(n1)]);
    fft_.forward();
    for (std::size_t i = 0; i < f.size(); ++i) b[i] *= mult_[i];
    fft_.backward();
    out.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = b[i] * phase_[i % static_cast<std::size_t>(n1)];
  }

 private:
  Grid2D grid_;
  Fft2 fft_;
  std::vector<cplx> mult_;
  std::vector<cplx> phase_;
};

}  // namespace

double solver_half_height(const MediumParams& params) { return 2.0 * params.h() + 0.25; }

Grid2D solver_grid(const MediumParams& params, const SolverConfig& cfg) {
  const double R = solver_half_height(params);
  return Grid2D(-kPi, kPi, -R, R, cfg.n1, cfg.n2);
}

cplx periodized_profile_coeff(cplx beta, int m, double R) {
  const double gamma = kPi * m / R;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return kI * beta * (sign * std::exp(kI * beta * R) - 1.0) / (R * (gamma * gamma - beta * beta));
}

cplx periodized_multiplier(double k, double alpha_j, int m, double R) {
  // (i / (4 pi beta)) * 4 pi R * c_jm simplifies to a beta-free quotient.
  const cplx beta = beta_of(k, alpha_j);
  const double gamma = kPi * m / R;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return (1.0 - sign * std::exp(kI * beta * R)) / (gamma * gamma - beta * beta);
}

ComplexField incident_field(const IncidentSpec& spec, const Grid2D& grid, const MediumParams& params) {
  ComplexField f(grid);
  const double k = params.k();
  const double alpha = params.alpha();
  if (const auto* pw = std::get_if<PlaneWave>(&spec)) {
    const cplx b0 = beta_of(k, alpha);
    if (b0.imag() != 0.0) throw Error(ErrorCode::kInvalidArgument, "plane wave needs a propagating j = 0 mode");
    const double sgn = pw->direction == PlaneDirection::kDown ? -1.0 : 1.0;
    for (int i2 = 0; i2 < grid.n2(); ++i2) {
      for (int i1 = 0; i1 < grid.n1(); ++i1) {
        f.at(i1, i2) = std::exp(kI * (alpha * grid.x1(i1) + sgn * b0.real() * grid.x2(i2)));
      }
    }
    return f;
  }
  const Point s = std::get<PointSource>(spec).s;
  if (std::abs(s.x2) <= params.h()) {
    throw Error(ErrorCode::kSourceInsideSlab, "point source must satisfy |s2| > h");
  }
  const GreensEvalOptions gopts;
  double dmin = std::numeric_limits<double>::max();
  for (int i2 = 0; i2 < grid.n2(); ++i2) dmin = std::min(dmin, std::abs(grid.x2(i2) - s.x2));
  if (dmin < gopts.x2_switch) {
    throw Error(ErrorCode::kTooCloseVertically, "point source lies on a grid row; move it outside the solver box");
  }
  // Separable evaluation of the modal series, summed from large |j| inwards.
  const int trunc = auto_modal_trunc(params, dmin);
  std::vector<int> js;
  js.reserve(static_cast<std::size_t>(2 * trunc + 1));
  for (int a = trunc; a >= 0; --a) {
    js.push_back(a);
    if (a) js.push_back(-a);
  }
  const std::size_t nj = js.size();
  std::vector<cplx> col(static_cast<std::size_t>(grid.n1()) * nj);
  for (int i1 = 0; i1 < grid.n1(); ++i1) {
    for (std::size_t t = 0; t < nj; ++t) {
      col[static_cast<std::size_t>(i1) * nj + t] = std::exp(kI * ((alpha + js[t]) * (grid.x1(i1) - s.x1)));
    }
  }
  std::vector<cplx> row(nj);
  for (int i2 = 0; i2 < grid.n2(); ++i2) {
    const double d2 = std::abs(grid.x2(i2) - s.x2);
    for (std::size_t t = 0; t < nj; ++t) {
      const cplx b = beta_of(k, alpha + js[t]);
      row[t] = std::exp(kI * b * d2) / b;
    }
    for (int i1 = 0; i1 < grid.n1(); ++i1) {
      cplx acc{0.0, 0.0};
      const cplx* c = &col[static_cast<std::size_t>(i1) * nj];
      for (std::size_t t = 0; t < nj; ++t) acc += row[t] * c[t];
      f.at(i1, i2) = kI / (4.0 * kPi) * acc;
    }
  }
  return f;
}

ForwardSolution solve_total_field(const Scene& scene, const IncidentSpec& spec, const SolverConfig& cfg) {
  const MediumParams& params = scene.params();
  const double R = solver_half_height(params);
  ForwardSolution sol;
  sol.grid = solver_grid(params, cfg);
  sol.incident = spec;
  sol.contrast = rasterize(scene, sol.grid);
  sol.incident_field = incident_field(spec, sol.grid, params);
  sol.total_field = sol.incident_field;

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < sol.contrast.values.size(); ++i) {
    if (sol.contrast.values[i] != cplx{0.0, 0.0}) support.push_back(i);
  }
  if (support.empty()) return sol;

  PeriodizedConvolution conv(params, sol.grid, R, cfg.resonance_tol);
  const double k2 = params.k() * params.k();
  const auto& q = sol.contrast.values;
  std::vector<cplx> full(sol.grid.size());
  std::vector<cplx> conv_out;

  // Unknowns are the total field on supp q; everything else follows explicitly.
  LinearOp op = [&](const CVec& x, CVec& out) {
    std::fill(full.begin(), full.end(), cplx{0.0, 0.0});
    for (std::size_t s = 0; s < support.size(); ++s) full[support[s]] = q[support[s]] * x[s];
    conv.apply(full, conv_out);
    out.resize(x.size());
    for (std::size_t s = 0; s < support.size(); ++s) out[s] = x[s] - k2 * conv_out[support[s]];
  };
  CVec rhs(support.size());
  for (std::size_t s = 0; s < support.size(); ++s) rhs[s] = sol.incident_field.values[support[s]];
  CVec x = rhs;
  GmresOptions gopts;
  gopts.tol = cfg.tol;
  gopts.max_iter = cfg.max_iter;
  gopts.restart = cfg.restart;
  const GmresResult gr = gmres(op, rhs, x, gopts);
  sol.residual = gr.residual;
  sol.iterations = gr.iterations;
  if (!gr.converged) {
    std::ostringstream msg;
    msg << "Lippmann-Schwinger iteration stopped after " << gr.iterations << " iterations at relative residual "
        << gr.residual;
    throw Error(ErrorCode::kSolverDiverged, msg.str(),
                "{\"residual\": " + std::to_string(gr.residual) + ", \"iterations\": " +
                    std::to_string(gr.iterations) + "}");
  }
  std::fill(full.begin(), full.end(), cplx{0.0, 0.0});
  for (std::size_t s = 0; s < support.size(); ++s) full[support[s]] = q[support[s]] * x[s];
  conv.apply(full, conv_out);
  for (std::size_t i = 0; i < full.size(); ++i) {
    sol.total_field.values[i] = sol.incident_field.values[i] + k2 * conv_out[i];
  }
  // Keep the solved values exactly on the support.
  for (std::size_t s = 0; s < support.size(); ++s) sol.total_field.values[support[s]] = x[s];
  return sol;
}

namespace {

SourceDescriptor describe(const IncidentSpec& spec, int id) {
  SourceDescriptor d;
  d.id = id;
  if (const auto* ps = std::get_if<PointSource>(&spec)) {
    d.kind = SourceKind::kPointSource;
    d.position = ps->s;
  } else {
    d.kind = std::get<PlaneWave>(spec).direction == PlaneDirection::kDown ? SourceKind::kPlaneWaveDown
                                                                           : SourceKind::kPlaneWaveUp;
  }
  return d;
}

}  // namespace

RayleighData rayleigh_from_volume(const ForwardSolution& sol, const Scene& scene) {
  const MediumParams& params = scene.params();
  RayleighData data(params, params.window_min(), params.window_max());
  data.add_source(describe(sol.incident, 0));
  const ComplexField q = sol.contrast.grid == sol.grid ? sol.contrast : rasterize(scene, sol.grid);
  const Grid2D& g = sol.grid;
  const double w = params.k() * params.k() * g.cell_area();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < q.values.size(); ++i) {
    if (q.values[i] != cplx{0.0, 0.0}) support.push_back(i);
  }
  for (int j = data.j_min(); j <= data.j_max(); ++j) {
    cplx sp{0.0, 0.0};
    cplx sm{0.0, 0.0};
    for (std::size_t idx : support) {
      const auto [i1, i2] = g.indices(idx);
      const CoeffPair gj = g_coeffs(g.point(i1, i2), j, params);
      const cplx f = q.values[idx] * sol.total_field.values[idx];
      sp += gj.plus * f;
      sm += gj.minus * f;
    }
    data.coeff(0, j) = {w * sp, w * sm};
  }
  return data;
}

std::vector<double> trace_points(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = -kPi + (i + 0.5) * kTwoPi / n;
  return x;
}

Trace synthesize_trace(const RayleighData& data, std::size_t source, double r, int n_points) {
  const MediumParams& params = data.params();
  if (r < params.h()) throw Error(ErrorCode::kInvalidArgument, "trace height must satisfy r >= h");
  if (n_points < 2) throw Error(ErrorCode::kInvalidArgument, "trace needs at least 2 points");
  Trace t;
  t.r = r;
  t.x1 = trace_points(n_points);
  t.plus.assign(t.x1.size(), cplx{0.0, 0.0});
  t.minus.assign(t.x1.size(), cplx{0.0, 0.0});
  for (int j = data.j_min(); j <= data.j_max(); ++j) {
    const Mode m = params.mode(j);
    const cplx lift = std::exp(kI * m.beta_j * (r - params.h()));
    const CoeffPair& c = data.coeff(source, j);
    for (std::size_t i = 0; i < t.x1.size(); ++i) {
      const cplx e = std::exp(kI * m.alpha_j * t.x1[i]);
      t.plus[i] += c.plus * lift * e;
      t.minus[i] += c.minus * lift * e;
    }
  }
  return t;
}

Trace scattered_trace(const ForwardSolution& sol, const Scene& scene, double r, int n_points) {
  return synthesize_trace(rayleigh_from_volume(sol, scene), 0, r, n_points);
}

// Direct quadrature of u_sc(x) = k^2 * integral G(x, y) q(y) u(y) dy on the two lines.
Trace potential_trace(const ForwardSolution& sol, const Scene& scene, double r, int n_points) {
  const MediumParams& params = scene.params();
  if (r < params.h()) throw Error(ErrorCode::kInvalidArgument, "trace height must satisfy r >= h");
  if (n_points < 2) throw Error(ErrorCode::kInvalidArgument, "trace needs at least 2 points");
  const ComplexField q = sol.contrast.grid == sol.grid ? sol.contrast : rasterize(scene, sol.grid);
  const Grid2D& g = sol.grid;
  const double w = params.k() * params.k() * g.cell_area();
  Trace t;
  t.r = r;
  t.x1 = trace_points(n_points);
  t.plus.assign(t.x1.size(), cplx{0.0, 0.0});
  t.minus.assign(t.x1.size(), cplx{0.0, 0.0});
  for (std::size_t idx = 0; idx < q.values.size(); ++idx) {
    if (q.values[idx] == cplx{0.0, 0.0}) continue;
    const auto [i1, i2] = g.indices(idx);
    const Point y = g.point(i1, i2);
    const cplx f = w * q.values[idx] * sol.total_field.values[idx];
    for (std::size_t i = 0; i < t.x1.size(); ++i) {
      t.plus[i] += green_modal({t.x1[i], r}, y, params).value * f;
      t.minus[i] += green_modal({t.x1[i], -r}, y, params).value * f;
    }
  }
  return t;
}

RayleighData rayleigh_from_trace(const Trace& trace, const MediumParams& params, double r) {
  const int n = static_cast<int>(trace.x1.size());
  if (n < 2 || trace.plus.size() != trace.x1.size() || trace.minus.size() != trace.x1.size()) {
    throw Error(ErrorCode::kInvalidArgument, "malformed trace");
  }
  // Indices representable without aliasing: -n/2 < j < n/2 for even n.
  const int band_lo = -((n - 1) / 2);
  const int band_hi = n / 2 - (n % 2 == 0 ? 1 : 0);
  const auto prop = params.propagating_set();
  if (prop.front() < band_lo || prop.back() > band_hi) {
    std::ostringstream msg;
    msg << "propagating modes j in [" << prop.front() << ", " << prop.back() << "] exceed the Nyquist band of a "
        << n << "-point trace";
    throw Error(ErrorCode::kAliasedMode, msg.str());
  }
  RayleighData data(params, std::max(params.window_min(), band_lo), std::min(params.window_max(), band_hi));
  data.add_source(SourceDescriptor{});
  for (int j = data.j_min(); j <= data.j_max(); ++j) {
    const Mode m = params.mode(j);
    cplx cp{0.0, 0.0};
    cplx cm{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const cplx e = std::exp(-kI * m.alpha_j * trace.x1[iu]);
      cp += trace.plus[iu] * e;
      cm += trace.minus[iu] * e;
    }
    // Evanescent modes get amplified here; they are kept but never used as data.
    const cplx drop = std::exp(-kI * m.beta_j * (r - params.h())) / static_cast<double>(n);
    data.coeff(0, j) = {cp * drop, cm * drop};
  }
  return data;
}

double energy_balance(const RayleighData& data, const Scene& scene) {
  if (!scene.lossless()) throw Error(ErrorCode::kLossyScene, "energy balance needs a real contrast");
  if (data.n_sources() < 1 || data.sources().front().kind != SourceKind::kPlaneWaveDown) {
    throw Error(ErrorCode::kInvalidArgument, "energy balance needs data for a downward plane wave");
  }
  const MediumParams& params = data.params();
  const double b0 = params.mode(0).beta_j.real();
  double flux = 0.0;
  for (int j : data.prop_set()) {
    const double bj = params.mode(j).beta_j.real();
    const CoeffPair& c = data.coeff(0, j);
    cplx t = c.minus;
    // The incident wave expressed in the downward basis exp(-i beta_0 (x2 + h)).
    if (j == 0) t += std::exp(kI * b0 * params.h());
    flux += bj / b0 * (std::norm(c.plus) + std::norm(t));
  }
  return std::abs(1.0 - flux);
}

std::vector<Point> source_layout(int n_sources, double height) {
  if (n_sources < 2 || n_sources % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "number of sources must be even and >= 2");
  }
  const int half = n_sources / 2;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n_sources));
  for (double sgn : {1.0, -1.0}) {
    for (int i = 0; i < half; ++i) pts.push_back({-kPi + (i + 0.5) * kTwoPi / half, sgn * height});
  }
  return pts;
}

RayleighData solve_sources(const Scene& scene, const std::vector<IncidentSpec>& incidents, const SolverConfig& cfg,
                           const ProgressFn& progress, unsigned threads) {
  const MediumParams& params = scene.params();
  RayleighData out(params, params.window_min(), params.window_max());
  const std::size_t n = incidents.size();
  std::vector<std::optional<RayleighData>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const ForwardSolution sol = solve_total_field(scene, incidents[i], cfg);
        results[i] = rayleigh_from_volume(sol, scene);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, n);
      }
    }
  };
  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, std::max<std::size_t>(n, 1)));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = *results[i];
    std::size_t s = out.add_source(describe(incidents[i], static_cast<int>(i)));
    for (int j = out.j_min(); j <= out.j_max(); ++j) out.coeff(s, j) = r.coeff(0, j);
  }
  return out;
}

}  // namespace qpscat
