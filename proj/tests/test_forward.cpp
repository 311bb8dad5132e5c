#include "qpscat/forward.hpp"

#include "oracle_values.hpp"

#include <doctest.h>

using namespace qpscat;

namespace {

constexpr cplx kI{0.0, 1.0};

Scene disc_scene(double alpha = 0.0, double radius = 0.5, cplx q = {1.0, 0.0}) {
  return Scene(make_params(kTwoPi, alpha, 1.0, 2.0), {{Ellipse{{0.0, 0.0}, radius, radius, 0.0}, q}});
}

SolverConfig grid_cfg(int n) {
  SolverConfig c;
  c.n1 = n;
  c.n2 = n;
  return c;
}

double prop_rel_diff(const RayleighData& a, std::size_t la, const RayleighData& b, std::size_t lb) {
  double num = 0.0;
  double den = 0.0;
  for (int j : a.prop_set()) {
    num += std::norm(a.coeff(la, j).plus - b.coeff(lb, j).plus) + std::norm(a.coeff(la, j).minus - b.coeff(lb, j).minus);
    den += std::norm(a.coeff(la, j).plus) + std::norm(a.coeff(la, j).minus);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("profile coefficients match quadrature values") {
  for (const auto& row : oracle::kProfileTable) {
    const cplx c = periodized_profile_coeff({row.beta_re, row.beta_im}, row.m, row.R);
    CAPTURE(row.m);
    CHECK(std::abs(c - cplx(row.re, row.im)) <= 1e-12);
  }
  const double R = 2.25;
  const double k = kTwoPi;
  const double a = 1.3;
  const cplx beta = std::sqrt(cplx(k * k - a * a, 0.0));
  for (int m : {0, 1, 7, -3}) {
    const cplx expected = (kI / (4.0 * kPi * beta)) * (kTwoPi * 2.0 * R) * periodized_profile_coeff(beta, m, R);
    CHECK(std::abs(periodized_multiplier(k, a, m, R) - expected) <= 1e-14 * std::abs(expected));
  }
}

TEST_CASE("solver box and layout") {
  const MediumParams p = make_params(kTwoPi, 0.0, 1.0, 2.0);
  CHECK(solver_half_height(p) == 2.25);
  const auto pts = source_layout(4, 3.0);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].x2 == 3.0);
  CHECK(pts[2].x2 == -3.0);
  CHECK(pts[0].x1 == doctest::Approx(-kPi / 2));
  CHECK(pts[1].x1 == doctest::Approx(kPi / 2));
  const auto tp = trace_points(4);
  CHECK(tp[0] == doctest::Approx(-3.0 * kPi / 4));
}

TEST_CASE("incident fields") {
  const MediumParams p = make_params(kTwoPi, kPi / 3.0, 1.0, 2.0);
  const Grid2D g(-kPi, kPi, -1.0, 1.0, 16, 16);
  const ComplexField pw = incident_field(PlaneWave{}, g, p);
  const Point z = g.point(3, 5);
  CHECK(std::abs(pw.at(3, 5) - std::exp(kI * (p.alpha() * z.x1 - p.mode(0).beta_j.real() * z.x2))) <= 1e-14);

  // Point sources are quasi-periodic across the seam.
  const Grid2D seam(-kPi, kPi, -1.0, 1.0, 2, 2);
  const Grid2D shifted(kPi, 3 * kPi, -1.0, 1.0, 2, 2);
  const ComplexField a = incident_field(PointSource{{0.3, 3.0}}, seam, p);
  const ComplexField b = incident_field(PointSource{{0.3, 3.0}}, shifted, p);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::abs(b.values[i] - std::exp(kI * kTwoPi * p.alpha()) * a.values[i]) <= 1e-12);
  }
  try {
    incident_field(PointSource{{0.0, 0.5}}, g, p);
    FAIL("expected SourceInsideSlab");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSourceInsideSlab);
  }
}

TEST_CASE("empty scene leaves the incident field untouched") {
  const Scene empty(make_params(kTwoPi, 0.0, 1.0, 2.0), {});
  const ForwardSolution sol = solve_total_field(empty, PlaneWave{}, grid_cfg(64));
  CHECK(sol.iterations == 0);
  for (std::size_t i = 0; i < sol.total_field.values.size(); ++i) {
    CHECK(sol.total_field.values[i] == sol.incident_field.values[i]);
  }
}

TEST_CASE("Rayleigh coefficients converge under grid refinement") {
  const Scene scene = disc_scene();
  const IncidentSpec src = PointSource{{0.3, 3.0}};
  std::vector<RayleighData> d;
  for (int n : {64, 128, 256}) d.push_back(rayleigh_from_volume(solve_total_field(scene, src, grid_cfg(n)), scene));
  const double e1 = prop_rel_diff(d[2], 0, d[0], 0);
  const double e2 = prop_rel_diff(d[2], 0, d[1], 0);
  CHECK(e2 < e1);
  CHECK(e2 <= 0.05);
}

TEST_CASE("energy balance for a lossless disc") {
  const Scene scene = disc_scene(kPi / 3.0);
  const ForwardSolution sol = solve_total_field(scene, PlaneWave{}, grid_cfg(256));
  CHECK(energy_balance(rayleigh_from_volume(sol, scene), scene) <= 1e-3);

  const Scene empty(make_params(kTwoPi, 0.0, 1.0, 2.0), {});
  const ForwardSolution none = solve_total_field(empty, PlaneWave{}, grid_cfg(32));
  CHECK(energy_balance(rayleigh_from_volume(none, empty), empty) <= 1e-15);

  const Scene lossy = disc_scene(0.0, 0.5, {1.0, 0.5});
  const ForwardSolution ls = solve_total_field(lossy, PlaneWave{}, grid_cfg(32));
  try {
    energy_balance(rayleigh_from_volume(ls, lossy), lossy);
    FAIL("expected LossyScene");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLossyScene);
  }
}

TEST_CASE("volume and trace routes agree") {
  const Scene scene = disc_scene(kPi / 3.0);
  const ForwardSolution sol = solve_total_field(scene, PointSource{{-0.7, -3.0}}, grid_cfg(128));
  const RayleighData vol = rayleigh_from_volume(sol, scene);
  for (double r : {2.0, 2.5}) {
    const RayleighData tr = rayleigh_from_trace(scattered_trace(sol, scene, r, 64), scene.params(), r);
    CHECK(prop_rel_diff(vol, 0, tr, 0) <= 1e-6);
  }
  const RayleighData pot = rayleigh_from_trace(potential_trace(sol, scene, 2.0, 64), scene.params(), 2.0);
  CHECK(prop_rel_diff(vol, 0, pot, 0) <= 1e-6);
}

TEST_CASE("projection refuses aliased propagating modes") {
  const MediumParams p = make_params(40.5, 0.0, 1.0, 2.0);
  Trace t;
  t.r = 2.0;
  t.x1 = trace_points(64);
  t.plus.assign(64, cplx{0.0, 0.0});
  t.minus.assign(64, cplx{0.0, 0.0});
  try {
    rayleigh_from_trace(t, p, 2.0);
    FAIL("expected AliasedMode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAliasedMode);
  }
}

TEST_CASE("weak scatterers follow the Born approximation") {
  const IncidentSpec src = PointSource{{0.3, 3.0}};
  auto born_gap = [&](double q) {
    const Scene scene = disc_scene(0.0, 0.1, {q, 0.0});
    ForwardSolution sol = solve_total_field(scene, src, grid_cfg(128));
    const RayleighData full = rayleigh_from_volume(sol, scene);
    sol.total_field = sol.incident_field;
    const RayleighData born = rayleigh_from_volume(sol, scene);
    return prop_rel_diff(born, 0, full, 0);
  };
  const double g1 = born_gap(1e-3);
  const double g2 = born_gap(2e-3);
  CHECK(g1 <= 1e-3);
  // The defect is second order in q relative to the first-order data.
  CHECK(g2 / g1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("solve_sources is independent of thread count") {
  const Scene scene = disc_scene(kPi / 3.0);
  std::vector<IncidentSpec> inc;
  for (const Point& s : source_layout(4)) inc.push_back(PointSource{s});
  const RayleighData a = solve_sources(scene, inc, grid_cfg(64), {}, 1);
  const RayleighData b = solve_sources(scene, inc, grid_cfg(64), {}, 3);
  REQUIRE(a.n_sources() == 4);
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(a.sources()[l].id == static_cast<int>(l));
    for (int j = a.j_min(); j <= a.j_max(); ++j) {
      CHECK(a.coeff(l, j).plus == b.coeff(l, j).plus);
      CHECK(a.coeff(l, j).minus == b.coeff(l, j).minus);
    }
  }
}
