#include "qpscat/scatterers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace qpscat {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kMaxContrast = 10.0;

bool kite_contains(const Kite& kite, Point p) {
  // Horizontal slices cross the kite twice: at t and pi - t with sin t = s.
  const double u = (p.x1 - kite.center.x1) / kite.scale;
  const double v = (p.x2 - kite.center.x2) / kite.scale;
  const double s = v / 1.5;
  if (std::abs(s) >= 1.0) return false;
  const double c = std::sqrt(1.0 - s * s);
  const double shift = 1.3 * s * s;
  return u > -c - shift && u < c - shift;
}

}  // namespace

bool contains(const Shape& shape, Point p) {
  return std::visit(
      overloaded{
          [&](const Ellipse& e) {
            const double dx = p.x1 - e.center.x1;
            const double dy = p.x2 - e.center.x2;
            const double cr = std::cos(e.rotation);
            const double sr = std::sin(e.rotation);
            const double u = (cr * dx + sr * dy) / e.semi_a;
            const double v = (-sr * dx + cr * dy) / e.semi_b;
            return u * u + v * v < 1.0;
          },
          [&](const Kite& k) { return kite_contains(k, p); },
          [&](const Cross& c) {
            const double dx = std::abs(p.x1 - c.center.x1);
            const double dy = std::abs(p.x2 - c.center.x2);
            const double l = 0.5 * c.arm_length;
            const double w = 0.5 * c.arm_width;
            return (dx < l && dy < w) || (dx < w && dy < l);
          },
          [&](const SinusoidBand& b) {
            return std::abs(p.x2 - b.amplitude * std::sin(p.x1 + b.phase)) < b.half_thickness;
          },
      },
      shape);
}

std::vector<Point> kite_boundary(const Kite& kite, int n) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    pts.push_back({kite.center.x1 + kite.scale * (std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65),
                   kite.center.x2 + kite.scale * 1.5 * std::sin(t)});
  }
  return pts;
}

Box support_box(const Shape& shape) {
  return std::visit(
      overloaded{
          [](const Ellipse& e) {
            const double cr = std::cos(e.rotation);
            const double sr = std::sin(e.rotation);
            const double hw = std::hypot(e.semi_a * cr, e.semi_b * sr);
            const double hh = std::hypot(e.semi_a * sr, e.semi_b * cr);
            return Box{e.center.x1 - hw, e.center.x1 + hw, e.center.x2 - hh, e.center.x2 + hh};
          },
          [](const Kite& k) {
            Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
                  k.center.x2 - 1.5 * k.scale, k.center.x2 + 1.5 * k.scale};
            for (const Point& p : kite_boundary(k, 20000)) {
              b.x1_min = std::min(b.x1_min, p.x1);
              b.x1_max = std::max(b.x1_max, p.x1);
            }
            // Sampling can miss the true extremum by O(scale * dt^2).
            const double pad = 1e-6 * k.scale;
            b.x1_min -= pad;
            b.x1_max += pad;
            return b;
          },
          [](const Cross& c) {
            const double l = 0.5 * std::max(c.arm_length, c.arm_width);
            return Box{c.center.x1 - l, c.center.x1 + l, c.center.x2 - l, c.center.x2 + l};
          },
          [](const SinusoidBand& s) {
            const double e = std::abs(s.amplitude) + s.half_thickness;
            return Box{-kPi, kPi, -e, e};
          },
      },
      shape);
}

const char* shape_type_name(const Shape& shape) {
  return std::visit(overloaded{[](const Ellipse&) { return "ellipse"; },
                               [](const Kite&) { return "kite"; },
                               [](const Cross&) { return "cross"; },
                               [](const SinusoidBand&) { return "sinusoid"; }},
                    shape);
}

Scene::Scene(MediumParams params, std::vector<SceneShape> shapes)
    : params_(std::move(params)), shapes_(std::move(shapes)) {
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    const auto& s = shapes_[i];
    const std::string where = "shape " + std::to_string(i + 1) + " (" + shape_type_name(s.shape) + ")";
    if (!std::isfinite(s.q.real()) || !std::isfinite(s.q.imag()) || std::abs(s.q) > kMaxContrast) {
      throw Error(ErrorCode::kValidationError, where + ": contrast must satisfy |q| <= 10");
    }
    const bool bad_dims = std::visit(
        overloaded{[](const Ellipse& e) { return !(e.semi_a > 0.0 && e.semi_b > 0.0); },
                   [](const Kite& k) { return !(k.scale > 0.0); },
                   [](const Cross& c) { return !(c.arm_length > 0.0 && c.arm_width > 0.0); },
                   [](const SinusoidBand& b) { return !(b.half_thickness > 0.0); }},
        s.shape);
    if (bad_dims) throw Error(ErrorCode::kValidationError, where + ": dimensions must be positive");
    const Box b = support_box(s.shape);
    const bool periodic_band = std::holds_alternative<SinusoidBand>(s.shape);
    if (!periodic_band && (b.x1_min <= -kPi || b.x1_max >= kPi)) {
      throw Error(ErrorCode::kValidationError, where + ": support leaves the period cell (-pi, pi)");
    }
    if (std::max(std::abs(b.x2_min), std::abs(b.x2_max)) >= params_.h()) {
      throw Error(ErrorCode::kValidationError, where + ": support reaches |x2| >= h");
    }
  }
}

bool Scene::lossless() const {
  return std::all_of(shapes_.begin(), shapes_.end(), [](const SceneShape& s) { return s.q.imag() == 0.0; });
}

double Scene::support_height() const {
  double m = 0.0;
  for (const auto& s : shapes_) {
    const Box b = support_box(s.shape);
    m = std::max({m, std::abs(b.x2_min), std::abs(b.x2_max)});
  }
  return m;
}

cplx contrast_at(const Scene& scene, Point p) {
  cplx q{0.0, 0.0};
  for (const auto& s : scene.shapes()) {
    if (contains(s.shape, p)) q += s.q;
  }
  return q;
}

ComplexField rasterize(const Scene& scene, const Grid2D& grid) {
  ComplexField f(grid);
  if (scene.empty()) return f;
  for (int i2 = 0; i2 < grid.n2(); ++i2) {
    for (int i1 = 0; i1 < grid.n1(); ++i1) {
      f.at(i1, i2) = contrast_at(scene, grid.point(i1, i2));
    }
  }
  return f;
}

namespace {

[[noreturn]] void parse_fail(int line, int column, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ", column " << column << ": " << what;
  throw Error(ErrorCode::kParseError, msg.str(),
              "{\"line\": " + std::to_string(line) + ", \"column\": " + std::to_string(column) + "}");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, std::pair<double, int>> values;  // key -> (value, line)
  std::optional<std::string> type;
  int type_line = 0;
};

double get(const Section& sec, const std::string& key, double fallback) {
  const auto it = sec.values.find(key);
  return it == sec.values.end() ? fallback : it->second.first;
}

}  // namespace

Scene parse_scene(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const int col = static_cast<int>(line.find_first_not_of(" \t\r")) + 1;
    if (body.front() == '[') {
      if (body.back() != ']') parse_fail(line_no, col, "unterminated section header");
      const std::string name = trim(body.substr(1, body.size() - 2));
      if (name != "medium" && name != "shape") parse_fail(line_no, col + 1, "unknown section [" + name + "]");
      if (name == "medium") {
        for (const auto& s : sections) {
          if (s.name == "medium") parse_fail(line_no, col, "duplicate [medium] section");
        }
      }
      sections.push_back(Section{name, line_no, {}, std::nullopt, 0});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, col, "expected 'name = value'");
    if (sections.empty()) parse_fail(line_no, col, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const int value_col = static_cast<int>(line.find_first_not_of(" \t\r", eq + 1)) + 1;
    if (key.empty()) parse_fail(line_no, col, "missing key before '='");
    if (value.empty()) parse_fail(line_no, static_cast<int>(eq) + 2, "missing value after '='");
    Section& sec = sections.back();
    if (sec.values.count(key) || (key == "type" && sec.type)) parse_fail(line_no, col, "duplicate key '" + key + "'");
    if (sec.name == "shape" && key == "type") {
      sec.type = value;
      sec.type_line = line_no;
      continue;
    }
    static const std::map<std::string, std::vector<std::string>> allowed = {
        {"medium", {"k", "alpha", "h", "r_meas"}},
        {"shape", {"cx", "cy", "ax", "ay", "rot", "scale", "arm_len", "arm_wid", "amp", "thick", "phase",
                   "q_re", "q_im"}},
    };
    const auto& keys = allowed.at(sec.name);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      parse_fail(line_no, col, "unknown key '" + key + "' in [" + sec.name + "]");
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      parse_fail(line_no, value_col, "'" + value + "' is not a number");
    }
    if (!std::isfinite(v)) parse_fail(line_no, value_col, "value must be finite");
    sec.values[key] = {v, line_no};
  }

  const Section* medium = nullptr;
  for (const auto& s : sections) {
    if (s.name == "medium") medium = &s;
  }
  if (!medium) parse_fail(line_no + 1, 1, "missing [medium] section");
  for (const char* req : {"k", "h"}) {
    if (!medium->values.count(req)) parse_fail(medium->line, 1, std::string("[medium] requires key '") + req + "'");
  }

  std::optional<MediumParams> params;
  try {
    params = make_params(get(*medium, "k", 0.0), get(*medium, "alpha", 0.0), get(*medium, "h", 0.0),
                         get(*medium, "r_meas", 2.0));
  } catch (const Error& e) {
    std::string detail = "{\"cause\": \"" + std::string(error_code_name(e.code())) + "\"";
    if (!e.detail().empty()) detail += ", \"cause_detail\": " + e.detail();
    detail += "}";
    throw Error(ErrorCode::kValidationError, std::string("invalid [medium]: ") + e.what(), detail);
  }

  std::vector<SceneShape> shapes;
  for (const auto& sec : sections) {
    if (sec.name != "shape") continue;
    if (!sec.type) parse_fail(sec.line, 1, "[shape] requires key 'type'");
    const std::string& t = *sec.type;
    const Point c{get(sec, "cx", 0.0), get(sec, "cy", 0.0)};
    Shape shape;
    std::vector<std::string> own;
    if (t == "ellipse") {
      shape = Ellipse{c, get(sec, "ax", 0.6), get(sec, "ay", 0.3), get(sec, "rot", 0.0)};
      own = {"cx", "cy", "ax", "ay", "rot"};
    } else if (t == "kite") {
      shape = Kite{c, get(sec, "scale", 0.4)};
      own = {"cx", "cy", "scale"};
    } else if (t == "cross") {
      shape = Cross{c, get(sec, "arm_len", 1.2), get(sec, "arm_wid", 0.3)};
      own = {"cx", "cy", "arm_len", "arm_wid"};
    } else if (t == "sinusoid") {
      shape = SinusoidBand{get(sec, "amp", 0.5), get(sec, "thick", 0.15), get(sec, "phase", 0.0)};
      own = {"amp", "thick", "phase"};
    } else {
      parse_fail(sec.type_line, 1, "unknown shape type '" + t + "'");
    }
    for (const auto& [key, val] : sec.values) {
      if (key == "q_re" || key == "q_im") continue;
      if (std::find(own.begin(), own.end(), key) == own.end()) {
        parse_fail(val.second, 1, "key '" + key + "' does not apply to shape type '" + t + "'");
      }
    }
    shapes.push_back({shape, cplx{get(sec, "q_re", 1.0), get(sec, "q_im", 0.0)}});
  }

  try {
    return Scene(*params, std::move(shapes));
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidationError, e.what(), "{\"cause\": \"ShapeValidation\"}");
  }
}

Scene load_scene_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kMissingInput, "cannot open scene file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scene(ss.str());
}

std::string format_scene(const Scene& scene) {
  std::ostringstream o;
  o << std::setprecision(17);
  const auto& p = scene.params();
  o << "[medium]\nk = " << p.k() << "\nalpha = " << p.alpha() << "\nh = " << p.h() << "\nr_meas = " << p.r_meas()
    << "\n";
  for (const auto& s : scene.shapes()) {
    o << "\n[shape]\ntype = " << shape_type_name(s.shape) << "\n";
    std::visit(overloaded{[&](const Ellipse& e) {
                            o << "cx = " << e.center.x1 << "\ncy = " << e.center.x2 << "\nax = " << e.semi_a
                              << "\nay = " << e.semi_b << "\nrot = " << e.rotation << "\n";
                          },
                          [&](const Kite& k) {
                            o << "cx = " << k.center.x1 << "\ncy = " << k.center.x2 << "\nscale = " << k.scale
                              << "\n";
                          },
                          [&](const Cross& c) {
                            o << "cx = " << c.center.x1 << "\ncy = " << c.center.x2 << "\narm_len = " << c.arm_length
                              << "\narm_wid = " << c.arm_width << "\n";
                          },
                          [&](const SinusoidBand& b) {
                            o << "amp = " << b.amplitude << "\nthick = " << b.half_thickness
                              << "\nphase = " << b.phase << "\n";
                          }},
               s.shape);
    o << "q_re = " << s.q.real() << "\nq_im = " << s.q.imag() << "\n";
  }
  return o.str();
}

}  // namespace qpscat
