#include "qpscat/core.hpp"

#include "oracle_values.hpp"

#include <doctest.h>

#include <random>

using namespace qpscat;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kInvalidArgument;
}

std::vector<int> brute_force_prop(double k, double alpha) {
  std::vector<int> out;
  for (int j = -100; j <= 100; ++j) {
    if ((alpha + j) * (alpha + j) < k * k) out.push_back(j);
  }
  return out;
}

}  // namespace

TEST_CASE("make_params accepts typical settings") {
  const MediumParams p = make_params(kTwoPi, 0.0, 1.0, 2.0);
  CHECK(p.k() == kTwoPi);
  CHECK(p.period() == kTwoPi);
  CHECK_NOTHROW(make_params(kTwoPi, kPi / 3.0, 1.0, 2.0));
}

TEST_CASE("make_params rejects bad input") {
  CHECK(code_of([] { make_params(0.0, 0.0, 1.0, 2.0); }) == ErrorCode::kNonPositiveWaveNumber);
  CHECK(code_of([] { make_params(-1.0, 0.0, 1.0, 2.0); }) == ErrorCode::kNonPositiveWaveNumber);
  CHECK(code_of([] { make_params(kTwoPi, 0.0, 0.0, 2.0); }) == ErrorCode::kBadGeometry);
  CHECK(code_of([] { make_params(kTwoPi, 0.0, 1.0, 0.5); }) == ErrorCode::kBadGeometry);
  CHECK_NOTHROW(make_params(kTwoPi, 0.0, 1.0, 1.0));  // r_meas = h is allowed
}

TEST_CASE("Wood anomaly guard reports the offending mode") {
  try {
    make_params(1.0, 0.0, 1.0, 2.0);
    FAIL("expected WoodAnomalyProximity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kWoodAnomalyProximity);
    CHECK(e.detail().find("\"j\"") != std::string::npos);
  }
  // Just outside the relative guard is fine, just inside is not.
  CHECK_NOTHROW(make_params(1.0 + 1e-5, 0.0, 1.0, 2.0));
  CHECK(code_of([] { make_params(1.0 + 1e-8, 0.0, 1.0, 2.0); }) == ErrorCode::kWoodAnomalyProximity);
}

TEST_CASE("mode values") {
  const MediumParams p = make_params(kTwoPi, 0.0, 1.0, 2.0);
  CHECK(p.mode(0).beta_j == cplx(kTwoPi, 0.0));
  CHECK(p.mode(6).beta_j.real() == doctest::Approx(oracle::kBeta6).epsilon(1e-14));
  CHECK(p.mode(6).beta_j.imag() == 0.0);
  CHECK(p.mode(7).beta_j.real() == 0.0);
  CHECK(p.mode(7).beta_j.imag() == doctest::Approx(oracle::kBeta7).epsilon(1e-14));
  CHECK(p.mode(6).propagating());
  CHECK_FALSE(p.mode(7).propagating());
  const MediumParams q = make_params(kTwoPi, kPi / 3.0, 1.0, 2.0);
  for (int j = -20; j <= 20; ++j) CHECK(q.mode(j).alpha_j - q.alpha() == doctest::Approx(j).epsilon(1e-15));
}

TEST_CASE("mode invariants hold for every j") {
  const MediumParams p = make_params(3.7, 0.21, 1.0, 2.0);
  for (int j = -40; j <= 40; ++j) {
    const Mode m = p.mode(j);
    CHECK(m.beta_j.real() * m.beta_j.imag() == 0.0);
    CHECK(m.beta_j.real() >= 0.0);
    CHECK(m.beta_j.imag() >= 0.0);
    CHECK(std::norm(m.beta_j) == doctest::Approx(std::abs(p.k() * p.k() - m.alpha_j * m.alpha_j)).epsilon(1e-13));
  }
}

TEST_CASE("propagating sets") {
  CHECK(make_params(kTwoPi, 0.0, 1.0, 2.0).propagating_set() == brute_force_prop(kTwoPi, 0.0));
  CHECK(make_params(kTwoPi, 0.0, 1.0, 2.0).propagating_set().size() == 13);
  CHECK(make_params(kPi, 0.0, 1.0, 2.0).propagating_set() == std::vector<int>{-3, -2, -1, 0, 1, 2, 3});
  CHECK(make_params(0.5, 0.0, 1.0, 2.0).propagating_set() == std::vector<int>{0});

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> kd(0.2, 30.0);
  std::uniform_real_distribution<double> ad(-2.0, 2.0);
  int tested = 0;
  while (tested < 200) {
    const double k = kd(rng);
    const double a = ad(rng);
    try {
      const MediumParams p = make_params(k, a, 1.0, 2.0);
      CHECK(p.propagating_set() == brute_force_prop(k, a));
      ++tested;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kWoodAnomalyProximity);
    }
  }
}

TEST_CASE("storage window covers |alpha_j| <= k + 8/h") {
  const MediumParams p = make_params(kTwoPi, 0.3, 1.0, 2.0);
  const double lim = p.k() + 8.0 / p.h();
  for (int j = p.window_min(); j <= p.window_max(); ++j) CHECK(std::abs(p.alpha() + j) <= lim);
  CHECK(std::abs(p.alpha() + p.window_min() - 1) > lim);
  CHECK(std::abs(p.alpha() + p.window_max() + 1) > lim);
}

TEST_CASE("Grid2D is cell-centered and bijective") {
  const Grid2D g(-kPi, kPi, -1.0, 1.0, 16, 10);
  CHECK(g.x1(0) == doctest::Approx(-kPi + 0.5 * kTwoPi / 16));
  CHECK(g.x1(15) == doctest::Approx(kPi - 0.5 * kTwoPi / 16));
  CHECK(g.x1(0) > -kPi);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto [i1, i2] = g.indices(i);
    CHECK(g.index(i1, i2) == i);
    CHECK(g.nearest(g.point(i1, i2)) == std::pair{i1, i2});
  }
  CHECK_THROWS_AS(Grid2D(0.0, 0.0, -1.0, 1.0, 4, 4), Error);
  CHECK_THROWS_AS(Grid2D(-1.0, 1.0, -1.0, 1.0, 1, 4), Error);
}

TEST_CASE("grid dimension strings") {
  CHECK(parse_grid_dims("128x96") == std::pair{128, 96});
  CHECK_THROWS_AS(parse_grid_dims("128"), Error);
  CHECK_THROWS_AS(parse_grid_dims("axb"), Error);
  CHECK_THROWS_AS(parse_grid_dims("0x5"), Error);
}

TEST_CASE("RayleighData storage") {
  const MediumParams p = make_params(kTwoPi, 0.0, 1.0, 2.0);
  RayleighData d(p, p.window_min(), p.window_max());
  CHECK(d.prop_set() == p.propagating_set());
  const auto s = d.add_source({7, SourceKind::kPointSource, {0.0, 3.0}});
  d.coeff(s, 3) = {cplx(1, 2), cplx(3, 4)};
  CHECK(d.coeff(0, 3).minus == cplx(3, 4));
  CHECK(d.coeff(0, -3).plus == cplx(0, 0));
  CHECK_THROWS_AS(d.coeff(0, p.window_max() + 1), Error);
  CHECK_THROWS_AS(d.coeff(1, 0), Error);
  CHECK_THROWS_AS(RayleighData(p, -3, 3), Error);  // misses propagating modes

  RayleighData e(p, p.window_min(), p.window_max());
  e.add_source({8, SourceKind::kPointSource, {0.0, -3.0}});
  d.append(e);
  CHECK(d.n_sources() == 2);
  CHECK(d.sources()[1].id == 8);
}

TEST_CASE("error code names") {
  CHECK(std::string(error_code_name(ErrorCode::kWoodAnomalyProximity)) == "WoodAnomalyProximity");
  CHECK(std::string(error_code_name(ErrorCode::kMissingInput)) == "MissingInput");
}
