#include "qpscat/noise.hpp"

#include <doctest.h>

#include <random>

using namespace qpscat;

namespace {

RayleighData synth_data(int n_sources, unsigned seed, double alpha = 0.0) {
  const MediumParams p = make_params(kTwoPi, alpha, 1.0, 2.0);
  RayleighData d(p, p.window_min(), p.window_max());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int l = 0; l < n_sources; ++l) {
    const auto s = d.add_source({l, SourceKind::kPointSource, {0.0, 3.0}});
    for (int j = d.j_min(); j <= d.j_max(); ++j) d.coeff(s, j) = {cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng))};
  }
  return d;
}

bool is_prop(const RayleighData& d, int j) {
  for (int q : d.prop_set()) {
    if (q == j) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("zero noise is the identity") {
  const RayleighData d = synth_data(3, 1);
  const NoisyData n = perturb(d, {0.0, 42});
  CHECK(n.achieved_delta == 0.0);
  for (std::size_t l = 0; l < 3; ++l) {
    for (int j = d.j_min(); j <= d.j_max(); ++j) {
      CHECK(n.data.coeff(l, j).plus == d.coeff(l, j).plus);
      CHECK(n.data.coeff(l, j).minus == d.coeff(l, j).minus);
    }
  }
}

TEST_CASE("noise level must lie in [0, 1)") {
  const RayleighData d = synth_data(1, 2);
  CHECK_THROWS_AS(perturb(d, {1.0, 0}), Error);
  CHECK_THROWS_AS(perturb(d, {-0.1, 0}), Error);
  CHECK_NOTHROW(perturb(d, {0.999, 0}));
}

TEST_CASE("only propagating coefficients are perturbed, each within delta") {
  const RayleighData d = synth_data(2, 3, kPi / 3.0);
  const NoisyData n = perturb(d, {0.3, 7});
  for (std::size_t l = 0; l < 2; ++l) {
    for (int j = d.j_min(); j <= d.j_max(); ++j) {
      const CoeffPair& a = d.coeff(l, j);
      const CoeffPair& b = n.data.coeff(l, j);
      if (is_prop(d, j)) {
        CHECK(std::abs(b.plus - a.plus) <= 0.3 * std::abs(a.plus) * (1 + 1e-15));
        CHECK(b.plus != a.plus);
      } else {
        CHECK(b.plus == a.plus);
        CHECK(b.minus == a.minus);
      }
    }
  }
}

TEST_CASE("fixed seeds reproduce, different seeds differ") {
  const RayleighData d = synth_data(2, 4);
  const NoisyData a = perturb(d, {0.2, 9});
  const NoisyData b = perturb(d, {0.2, 9});
  const NoisyData c = perturb(d, {0.2, 10});
  CHECK(a.achieved_delta == b.achieved_delta);
  CHECK(a.data.coeff(1, 0).plus == b.data.coeff(1, 0).plus);
  CHECK(a.data.coeff(1, 0).plus != c.data.coeff(1, 0).plus);
}

TEST_CASE("draws depend on the source id, not its position") {
  const RayleighData d = synth_data(3, 5);
  const MediumParams& p = d.params();
  RayleighData rev(p, d.j_min(), d.j_max());
  for (int l = 2; l >= 0; --l) {
    const auto s = rev.add_source(d.sources()[static_cast<std::size_t>(l)]);
    for (int j = d.j_min(); j <= d.j_max(); ++j) rev.coeff(s, j) = d.coeff(static_cast<std::size_t>(l), j);
  }
  const NoisyData a = perturb(d, {0.2, 11});
  const NoisyData b = perturb(rev, {0.2, 11});
  for (int j = d.j_min(); j <= d.j_max(); ++j) CHECK(a.data.coeff(0, j).plus == b.data.coeff(2, j).plus);
  CHECK(source_seed(11, 0) != source_seed(11, 1));
  CHECK(source_seed(11, 0) != source_seed(12, 0));
}

TEST_CASE("achieved noise level stays near the nominal level") {
  const RayleighData d = synth_data(4, 6);
  const double delta = 0.2;
  int inside = 0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    const double a = perturb(d, {delta, static_cast<std::uint64_t>(s)}).achieved_delta;
    if (a >= 0.5 * delta && a <= 1.2 * delta) ++inside;
  }
  CHECK(inside >= 0.99 * trials);
}

TEST_CASE("trace norm follows Parseval") {
  const MediumParams p = make_params(kTwoPi, 0.0, 1.0, 2.0);
  RayleighData d(p, p.window_min(), p.window_max());
  d.add_source({0, SourceKind::kPointSource, {0.0, 3.0}});
  d.coeff(0, 0) = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
  d.coeff(0, 7) = {cplx(5.0, 0.0), cplx(0.0, 0.0)};  // evanescent, ignored
  CHECK(trace_norm(d, 0) == doctest::Approx(std::sqrt(kTwoPi)));
}
