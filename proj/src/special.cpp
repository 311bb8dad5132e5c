#include "qpscat/special.hpp"

#include <boost/math/special_functions/bessel.hpp>

namespace qpscat::special {

namespace bm = boost::math;

double bessel_j0(double x) { return bm::cyl_bessel_j(0, x); }
double bessel_j1(double x) { return bm::cyl_bessel_j(1, x); }
double bessel_y0(double x) { return bm::cyl_neumann(0, x); }
double bessel_y1(double x) { return bm::cyl_neumann(1, x); }

std::complex<double> hankel1_0(double x) { return {bessel_j0(x), bessel_y0(x)}; }
std::complex<double> hankel1_1(double x) { return {bessel_j1(x), bessel_y1(x)}; }

}  // namespace qpscat::special
