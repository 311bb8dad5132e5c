#include "qpscat/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace qpscat;

TEST_CASE("fmt_double round-trips exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(i % 40) - 20);
    CHECK(std::stod(io::fmt_double(v)) == v);
  }
  CHECK(io::fmt_double(0.5) == "0.5");
}

TEST_CASE("Rayleigh CSV round trip is bit-exact") {
  const MediumParams p = make_params(kTwoPi, kPi / 3.0, 1.0, 2.5);
  RayleighData d(p, p.window_min(), p.window_max());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (int id : {4, 9}) {
    const auto s = d.add_source({id, SourceKind::kPointSource, {0.0, 3.0}});
    for (int j = d.j_min(); j <= d.j_max(); ++j) d.coeff(s, j) = {cplx(nd(rng), nd(rng)), cplx(nd(rng), 1e-300)};
  }
  const std::string text = io::format_rayleigh_csv(d);
  const RayleighData e = io::parse_rayleigh_csv(text);
  CHECK(e.params().k() == p.k());
  CHECK(e.params().alpha() == p.alpha());
  CHECK(e.params().r_meas() == 2.5);
  REQUIRE(e.n_sources() == 2);
  CHECK(e.sources()[1].id == 9);
  for (std::size_t l = 0; l < 2; ++l) {
    for (int j = d.j_min(); j <= d.j_max(); ++j) {
      CHECK(e.coeff(l, j).plus == d.coeff(l, j).plus);
      CHECK(e.coeff(l, j).minus == d.coeff(l, j).minus);
    }
  }
  CHECK(io::format_rayleigh_csv(e) == text);
}

TEST_CASE("malformed Rayleigh CSV is rejected") {
  CHECK_THROWS_AS(io::parse_rayleigh_csv(""), Error);
  CHECK_THROWS_AS(io::parse_rayleigh_csv("# k alpha h r_meas n_sources\n# 6.28 0 1 2 1\n0, 0, x, 0, 0, 0\n"), Error);
  try {
    io::read_file("/nonexistent/qpscat/file.csv");
    FAIL("expected MissingInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingInput);
  }
}

TEST_CASE("16-bit PGM layout") {
  const std::string pgm = io::format_pgm16({0.0, 1.0, 0.5, 0.25}, 2, 2);
  const std::string header = "P5\n2 2\n65535\n";
  REQUIRE(pgm.size() == header.size() + 8);
  CHECK(pgm.substr(0, header.size()) == header);
  auto px = [&](int i) {
    const auto* b = reinterpret_cast<const unsigned char*>(pgm.data() + header.size() + 2 * i);
    return (static_cast<unsigned>(b[0]) << 8) | b[1];
  };
  // First image row is the largest x2, i.e. the second stored row.
  CHECK(px(0) == 32768);
  CHECK(px(1) == 16384);
  CHECK(px(2) == 0);
  CHECK(px(3) == 65535);
}

TEST_CASE("grid CSV header") {
  const Grid2D g(-1.0, 1.0, -0.5, 0.5, 3, 2);
  const std::string csv = io::format_grid_csv(g, {0, 0.5, 1, 0.25, 0.75, 0}, "method p", "proposed 4");
  CHECK(csv.rfind("# n1 n2 x1min x1max x2min x2max method p\n# 3 2 -1 1 -0.5 0.5 proposed 4\n", 0) == 0);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 4);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "qpscat_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.txt").string();
  io::write_file_atomic(path, "hello\n");
  CHECK(io::file_exists(path));
  CHECK(io::read_file(path) == "hello\n");
  io::write_file_atomic(path, "bye\n");
  CHECK(io::read_file(path) == "bye\n");
  std::filesystem::remove_all(dir);
}
