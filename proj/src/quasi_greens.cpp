#include "qpscat/quasi_greens.hpp"

#include "qpscat/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpscat {

namespace {

constexpr cplx kI{0.0, 1.0};

// Smooth step from 0 at t <= 0 to 1 at t >= 1, all derivatives vanishing at the ends.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Sum of w_|j| * term(j) over |j| <= trunc, symmetric pairs accumulated in order of |j|.
template <class Term>
cplx weighted_image_sum(int trunc, const std::vector<double>& w, Term&& term) {
  cplx acc = w[0] * term(0);
  for (int j = 1; j <= trunc; ++j) {
    if (w[static_cast<std::size_t>(j)] == 0.0) continue;
    acc += w[static_cast<std::size_t>(j)] * (term(j) + term(-j));
  }
  return acc;
}

template <class Term>
SeriesValue accelerated_image_series(int trunc, SeriesSummation accel, Term&& term) {
  if (trunc < 1) throw Error(ErrorCode::kInvalidArgument, "image_trunc must be >= 1");
  const int coarse = std::max(1, (3 * trunc) / 4);
  const cplx fine_val = weighted_image_sum(trunc, image_weights(trunc, accel), term);
  const cplx coarse_val = weighted_image_sum(coarse, image_weights(coarse, accel), term);
  return {fine_val, std::abs(fine_val - coarse_val)};
}

}  // namespace

std::vector<double> image_weights(int trunc, SeriesSummation accel) {
  std::vector<double> w(static_cast<std::size_t>(trunc) + 1, 1.0);
  switch (accel) {
    case SeriesSummation::kPlain:
      break;
    case SeriesSummation::kCesaro2: {
      // (C,2) mean of symmetric partial sums S_0..S_n, n = trunc:
      // weight of |j| is (n - j + 1)(n - j + 2) / ((n + 1)(n + 2)).
      const double n = trunc;
      for (int j = 0; j <= trunc; ++j) {
        w[static_cast<std::size_t>(j)] = (n - j + 1.0) * (n - j + 2.0) / ((n + 1.0) * (n + 2.0));
      }
      break;
    }
    case SeriesSummation::kSmoothTaper: {
      const double start = 0.5 * trunc;
      const double width = trunc - start;
      for (int j = 0; j <= trunc; ++j) {
        w[static_cast<std::size_t>(j)] = 1.0 - smooth_step((j - start) / width);
      }
      break;
    }
  }
  return w;
}

int auto_modal_trunc(const MediumParams& params, double dx2) {
  const int window = std::max(std::abs(params.window_min()), std::abs(params.window_max()));
  // Need |beta_J| * dx2 >= 40 so that exp(-|beta_J| dx2) < 5e-18.
  const double need_beta = 40.0 / std::max(std::abs(dx2), 1e-300);
  const double need_alpha = std::sqrt(need_beta * need_beta + params.k() * params.k());
  const double j = std::ceil(need_alpha + std::abs(params.alpha())) + 1.0;
  const double capped = std::min(j, 1.0e6);
  return std::max(window, static_cast<int>(capped));
}

SeriesValue green_modal(Point x, Point y, const MediumParams& params, const GreensEvalOptions& opts) {
  const double dx1 = x.x1 - y.x1;
  const double dx2 = std::abs(x.x2 - y.x2);
  if (dx2 < opts.x2_switch) {
    std::ostringstream msg;
    msg << "modal Green's function needs |x2 - y2| >= " << opts.x2_switch << ", got " << dx2;
    throw Error(ErrorCode::kTooCloseVertically, msg.str());
  }
  const int trunc = opts.modal_trunc > 0 ? opts.modal_trunc : auto_modal_trunc(params, dx2);
  const double k = params.k();
  const double alpha = params.alpha();
  cplx acc{0.0, 0.0};
  // Sum from the largest |j| inwards so the small evanescent terms accumulate first.
  for (int a = trunc; a >= 0; --a) {
    for (int j : {a, -a}) {
      const double aj = alpha + j;
      const cplx b = beta_of(k, aj);
      acc += std::exp(kI * (aj * dx1) + kI * b * dx2) / b;
      if (a == 0) break;
    }
  }
  // First dropped pair bounds the tail of a geometric-like decay.
  double bound = 0.0;
  for (int j : {trunc + 1, -(trunc + 1)}) {
    const cplx b = beta_of(k, alpha + j);
    const double decay = std::exp(-b.imag() * dx2);
    const double term = decay / std::abs(b);
    const double ratio = std::exp(-dx2);
    bound += term / (1.0 - ratio);
  }
  return {kI / (4.0 * kPi) * acc, bound / (4.0 * kPi)};
}

SeriesValue green_spatial(Point x, Point y, const MediumParams& params, const GreensEvalOptions& opts) {
  const double dx1 = x.x1 - y.x1;
  const double dx2 = x.x2 - y.x2;
  const double k = params.k();
  const double alpha = params.alpha();
  for (int j = -opts.image_trunc; j <= opts.image_trunc; ++j) {
    const double r = std::hypot(dx1 + kTwoPi * j, dx2);
    if (r < 1e-12) {
      throw Error(ErrorCode::kSingularPoint, "x coincides with a periodic image of y",
                  "{\"j\": " + std::to_string(j) + "}");
    }
  }
  auto term = [&](int j) {
    const double r = std::hypot(dx1 + kTwoPi * j, dx2);
    return std::exp(-kI * (kTwoPi * j * alpha)) * special::hankel1_0(k * r);
  };
  SeriesValue s = accelerated_image_series(opts.image_trunc, opts.accel, term);
  s.value *= 0.25 * kI;
  s.error_estimate *= 0.25;
  return s;
}

CoeffPair g_coeffs(Point z, int j, const MediumParams& params) {
  const double aj = params.alpha() + j;
  const cplx b = beta_of(params.k(), aj);
  const double h = params.h();
  const cplx pre = kI / (4.0 * kPi * b);
  return {pre * std::exp(-kI * aj * z.x1 - kI * b * (z.x2 - h)),
          pre * std::exp(-kI * aj * z.x1 + kI * b * (z.x2 + h))};
}

cplx kernel_F_modal(Point zt, Point zs, const MediumParams& params) {
  cplx acc{0.0, 0.0};
  for (int j : params.propagating_set()) {
    const double b = beta_of(params.k(), params.alpha() + j).real();
    const CoeffPair gt = g_coeffs(zt, j, params);
    const CoeffPair gs = g_coeffs(zs, j, params);
    acc += b * (std::conj(gt.plus) * gs.plus + std::conj(gt.minus) * gs.minus);
  }
  return kTwoPi * acc;
}

SeriesValue kernel_F_spatial(Point z, Point y, const MediumParams& params, const GreensEvalOptions& opts) {
  const double dx1 = z.x1 - y.x1;
  const double dx2 = z.x2 - y.x2;
  const double k = params.k();
  const double alpha = params.alpha();
  auto term = [&](int j) {
    const double r = std::hypot(dx1 + kTwoPi * j, dx2);
    return std::exp(-kI * (kTwoPi * j * alpha)) * special::bessel_j0(k * r);
  };
  SeriesValue s = accelerated_image_series(opts.image_trunc, opts.accel, term);
  s.value *= 0.25;
  s.error_estimate *= 0.25;
  return s;
}

double kernel_F_free(Point z, Point y, const MediumParams& params) {
  return 0.25 * special::bessel_j0(params.k() * distance(z, y));
}

}  // namespace qpscat
