#include "qpscat/scatterers.hpp"

#include <doctest.h>

#include <random>

using namespace qpscat;

namespace {

MediumParams params_2pi() { return make_params(kTwoPi, 0.0, 1.0, 2.0); }

bool point_in_polygon(const std::vector<Point>& poly, Point p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point a = poly[i];
    const Point b = poly[j];
    if ((a.x2 > p.x2) != (b.x2 > p.x2) && p.x1 < (b.x1 - a.x1) * (p.x2 - a.x2) / (b.x2 - a.x2) + a.x1) in = !in;
  }
  return in;
}

double cross(Point o, Point a, Point b) { return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1); }

bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

const char* kMedium = "[medium]\nk = 6.283185307179586\nh = 1\n";

}  // namespace

TEST_CASE("kite membership agrees with a fine polygon") {
  const Kite kite{{0.1, -0.05}, 0.4};
  const auto poly = kite_boundary(kite, 10000);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u1(-0.6, 0.5);
  std::uniform_real_distribution<double> u2(-0.7, 0.6);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point p{u1(rng), u2(rng)};
    if (contains(kite, p) != point_in_polygon(poly, p)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("kite boundary is a simple curve") {
  const auto poly = kite_boundary(Kite{{0.0, 0.0}, 0.4}, 400);
  const std::size_t n = poly.size();
  int hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) ++hits;
    }
  }
  CHECK(hits == 0);
}

TEST_CASE("shape membership") {
  const Ellipse e{{0.0, 0.0}, 0.6, 0.3, 0.0};
  CHECK(contains(e, {0.59, 0.0}));
  CHECK_FALSE(contains(e, {0.0, 0.31}));
  const Ellipse r{{0.0, 0.0}, 0.6, 0.3, kPi / 2};
  CHECK(contains(r, {0.0, 0.59}));
  CHECK_FALSE(contains(r, {0.59, 0.0}));
  const Cross c{{0.0, 0.0}, 1.2, 0.3};
  CHECK(contains(c, {0.55, 0.1}));
  CHECK(contains(c, {0.1, -0.55}));
  CHECK_FALSE(contains(c, {0.4, 0.4}));
  const SinusoidBand s{0.5, 0.15, 0.0};
  CHECK(contains(s, {kPi / 2, 0.55}));
  CHECK_FALSE(contains(s, {kPi / 2, 0.0}));
}

TEST_CASE("support boxes") {
  const Box b = support_box(Ellipse{{0.2, -0.1}, 0.6, 0.3, 0.0});
  CHECK(b.x1_min == doctest::Approx(-0.4));
  CHECK(b.x2_max == doctest::Approx(0.2));
  const Box k = support_box(Kite{{0.0, 0.0}, 0.4});
  CHECK(k.x2_max == doctest::Approx(0.6));
  for (const Point& p : kite_boundary(Kite{{0.0, 0.0}, 0.4}, 5000)) {
    CHECK(p.x1 >= k.x1_min);
    CHECK(p.x1 <= k.x1_max);
  }
}

TEST_CASE("rasterized disc covers the right fraction and refines monotonically") {
  const Scene scene(params_2pi(), {{Ellipse{{0.0, 0.0}, 0.5, 0.5, 0.0}, {1.0, 0.0}}});
  double prev_err = 1.0;
  for (int n : {32, 128, 512}) {
    const Grid2D g(-kPi, kPi, -2.0, 2.0, n, n);
    const ComplexField f = rasterize(scene, g);
    double count = 0.0;
    for (const cplx& v : f.values) count += v.real();
    const double frac = count / static_cast<double>(g.size());
    const double err = std::abs(frac - 0.03125);
    if (n == 128) CHECK(err <= 0.15 * 0.03125);
    CHECK(err <= prev_err);
    prev_err = err;
  }
}

TEST_CASE("overlapping contrasts add") {
  const Scene scene(params_2pi(), {{Ellipse{{0.0, 0.0}, 0.5, 0.5, 0.0}, {1.0, 0.0}},
                                   {Ellipse{{0.2, 0.0}, 0.5, 0.3, 0.0}, {0.5, 0.25}}});
  CHECK(contrast_at(scene, {0.1, 0.0}) == cplx(1.5, 0.25));
  CHECK_FALSE(scene.lossless());
  CHECK(scene.support_height() == doctest::Approx(0.5));
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_scene(std::string(kMedium) + "[shape]\ntype = ellipse\nax = abc\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(e.detail().find("\"line\": 6") != std::string::npos);
    CHECK(e.detail().find("\"column\": 6") != std::string::npos);
  }
  CHECK(code_of("k = 1\n") == ErrorCode::kParseError);
  CHECK(code_of("[medium]\nk = 1\nh = 1\n[medium]\n") == ErrorCode::kParseError);
  CHECK(code_of(std::string(kMedium) + "[shape]\ntype = blob\n") == ErrorCode::kParseError);
  CHECK(code_of(std::string(kMedium) + "[shape]\ntype = kite\nax = 0.3\n") == ErrorCode::kParseError);
  CHECK(code_of(std::string(kMedium) + "colour = red\n") == ErrorCode::kParseError);
  CHECK(code_of("[medium]\nk = 1\n") == ErrorCode::kParseError);
}

TEST_CASE("validation errors") {
  CHECK(code_of(std::string(kMedium) + "[shape]\ntype = ellipse\nax = 0.5\nay = 1.2\n") ==
        ErrorCode::kValidationError);
  CHECK(code_of(std::string(kMedium) + "[shape]\ntype = ellipse\nax = 3.5\nay = 0.2\n") ==
        ErrorCode::kValidationError);
  CHECK(code_of(std::string(kMedium) + "[shape]\ntype = ellipse\nq_re = 20\n") == ErrorCode::kValidationError);
  try {
    parse_scene("[medium]\nk = 1\nh = 1\n");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidationError);
    CHECK(e.detail().find("WoodAnomalyProximity") != std::string::npos);
  }
}

TEST_CASE("scene text round trip") {
  const std::string text = std::string(kMedium) +
                           "alpha = 1.0471975511965976\n"
                           "[shape]\ntype = kite\ncx = 0.1\ncy = -0.2\nscale = 0.3\n"
                           "[shape]\ntype = cross\narm_len = 1\narm_wid = 0.2\nq_re = 0.5\nq_im = 0.1\n"
                           "[shape]\ntype = sinusoid\namp = 0.4\nthick = 0.1\nphase = 0.3\n";
  const Scene a = parse_scene(text);
  CHECK(a.shapes().size() == 3);
  const Scene b = parse_scene(format_scene(a));
  CHECK(format_scene(b) == format_scene(a));
  CHECK(b.params().alpha() == a.params().alpha());
  CHECK(b.shapes()[1].q == cplx(0.5, 0.1));

  const Scene empty = parse_scene(kMedium);
  CHECK(empty.empty());
  CHECK(empty.params().r_meas() == 2.0);
  CHECK(empty.support_height() == 0.0);
}
