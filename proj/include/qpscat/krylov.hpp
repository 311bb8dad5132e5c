// Restarted GMRES for complex linear operators given only by their action.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qpscat {

struct GmresOptions {
  double tol = 1e-10;     // relative residual target ||b - A x|| / ||b||
  int max_iter = 2000;    // total inner iterations
  int restart = 60;
};

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  // relative, recomputed from scratch at exit
  bool converged = false;
};

using CVec = std::vector<std::complex<double>>;
using LinearOp = std::function<void(const CVec& in, CVec& out)>;

/// Solves A x = b starting from the contents of `x`.
GmresResult gmres(const LinearOp& apply, const CVec& b, CVec& x, const GmresOptions& opts);

}  // namespace qpscat
