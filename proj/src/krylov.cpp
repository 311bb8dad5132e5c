#include "qpscat/krylov.hpp"

#include <algorithm>

namespace qpscat {

namespace {

using cplx = std::complex<double>;

double norm2(const CVec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx dot(const CVec& a, const CVec& b) {  // conj(a) . b
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

GmresResult gmres(const LinearOp& apply, const CVec& b, CVec& x, const GmresOptions& opts) {
  const std::size_t n = b.size();
  GmresResult res;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), cplx{0.0, 0.0});
    res.converged = true;
    return res;
  }
  const int m = std::max(1, opts.restart);
  CVec r(n);
  CVec w(n);
  std::vector<CVec> v(static_cast<std::size_t>(m) + 1, CVec(n));
  std::vector<cplx> hcol;
  std::vector<std::vector<cplx>> H(static_cast<std::size_t>(m) + 1, std::vector<cplx>(static_cast<std::size_t>(m)));
  std::vector<cplx> cs(static_cast<std::size_t>(m));
  std::vector<cplx> sn(static_cast<std::size_t>(m));
  std::vector<cplx> g(static_cast<std::size_t>(m) + 1);

  auto true_residual = [&]() {
    apply(x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    return norm2(r);
  };

  double rnorm = true_residual();
  res.residual = rnorm / bnorm;
  if (res.residual <= opts.tol) {
    res.converged = true;
    return res;
  }

  while (res.iterations < opts.max_iter) {
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), cplx{0.0, 0.0});
    g[0] = rnorm;
    int k = 0;
    for (; k < m && res.iterations < opts.max_iter; ++k) {
      ++res.iterations;
      const auto ku = static_cast<std::size_t>(k);
      apply(v[ku], w);
      // Modified Gram-Schmidt.
      for (int i = 0; i <= k; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const cplx hij = dot(v[iu], w);
        H[iu][ku] = hij;
        for (std::size_t t = 0; t < n; ++t) w[t] -= hij * v[iu][t];
      }
      const double hnext = norm2(w);
      H[ku + 1][ku] = hnext;
      if (hnext > 0.0) {
        for (std::size_t t = 0; t < n; ++t) v[ku + 1][t] = w[t] / hnext;
      }
      // Apply previous rotations to the new column.
      for (int i = 0; i < k; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const cplx a = H[iu][ku];
        const cplx bb = H[iu + 1][ku];
        H[iu][ku] = std::conj(cs[iu]) * a + std::conj(sn[iu]) * bb;
        H[iu + 1][ku] = -sn[iu] * a + cs[iu] * bb;
      }
      // New rotation zeroing H[k+1][k].
      const cplx a = H[ku][ku];
      const cplx bb = H[ku + 1][ku];
      const double denom = std::sqrt(std::norm(a) + std::norm(bb));
      if (denom == 0.0) {
        cs[ku] = 1.0;
        sn[ku] = 0.0;
      } else {
        cs[ku] = a / denom;
        sn[ku] = bb / denom;
      }
      H[ku][ku] = std::conj(cs[ku]) * a + std::conj(sn[ku]) * bb;
      H[ku + 1][ku] = 0.0;
      g[ku + 1] = -sn[ku] * g[ku];
      g[ku] = std::conj(cs[ku]) * g[ku];
      if (std::abs(g[ku + 1]) / bnorm <= opts.tol || hnext == 0.0) {
        ++k;
        break;
      }
    }
    // Back substitution for the k x k upper-triangular system.
    std::vector<cplx> y(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      const auto iu = static_cast<std::size_t>(i);
      cplx s = g[iu];
      for (int j = i + 1; j < k; ++j) s -= H[iu][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
      y[iu] = s / H[iu][iu];
    }
    for (int i = 0; i < k; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      for (std::size_t t = 0; t < n; ++t) x[t] += y[iu] * v[iu][t];
    }
    rnorm = true_residual();
    res.residual = rnorm / bnorm;
    if (res.residual <= opts.tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace qpscat
