// Cylinder functions of integer order on the positive real axis.
#pragma once

#include <complex>

namespace qpscat::special {

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);

/// H_0^(1)(x) = J_0(x) + i Y_0(x), x > 0.
std::complex<double> hankel1_0(double x);
/// H_1^(1)(x) = J_1(x) + i Y_1(x), x > 0.
std::complex<double> hankel1_1(double x);

}  // namespace qpscat::special
