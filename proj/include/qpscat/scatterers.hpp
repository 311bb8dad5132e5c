// Parametric periodic scatterers and the scene configuration format.
//
// Scene documents are line based:
//
//   # comment
//   [medium]
//   k = 6.283185307179586
//   alpha = 0
//   h = 1
//   r_meas = 2
//
//   [shape]
//   type = ellipse        # ellipse | kite | cross | sinusoid
//   cx = 0
//   cy = 0
//   ax = 0.6
//   ay = 0.3
//   rot = 0
//   q_re = 1
//   q_im = 0
//
// Type-specific keys: ellipse `cx cy ax ay rot`, kite `cx cy scale`,
// cross `cx cy arm_len arm_wid`, sinusoid `amp thick phase`.
#pragma once

#include "qpscat/core.hpp"

#include <string>
#include <variant>
#include <vector>

namespace qpscat {

struct Ellipse {
  Point center;
  double semi_a = 0.6;  // along the rotated x1 axis
  double semi_b = 0.3;
  double rotation = 0.0;  // radians, counter-clockwise
};

/// Scaled copy of the curve (cos t + 0.65 cos 2t - 0.65, 1.5 sin t).
struct Kite {
  Point center;
  double scale = 0.4;
};

/// Union of an arm_length x arm_width horizontal bar and its vertical twin.
struct Cross {
  Point center;
  double arm_length = 1.2;
  double arm_width = 0.3;
};

/// {|x2 - amplitude sin(x1 + phase)| < half_thickness}; spans the whole period.
struct SinusoidBand {
  double amplitude = 0.5;
  double half_thickness = 0.15;
  double phase = 0.0;
};

using Shape = std::variant<Ellipse, Kite, Cross, SinusoidBand>;

struct Box {
  double x1_min, x1_max, x2_min, x2_max;
};

bool contains(const Shape& shape, Point p);
/// Axis-aligned box enclosing the support.
Box support_box(const Shape& shape);
const char* shape_type_name(const Shape& shape);
/// Closed boundary curve of the kite sampled at `n` parameter values.
std::vector<Point> kite_boundary(const Kite& kite, int n);

struct SceneShape {
  Shape shape;
  cplx q{1.0, 0.0};
};

/// Shapes placed in the reference period cell; overlapping contrasts add.
class Scene {
 public:
  Scene(MediumParams params, std::vector<SceneShape> shapes);

  const MediumParams& params() const { return params_; }
  const std::vector<SceneShape>& shapes() const { return shapes_; }
  bool empty() const { return shapes_.empty(); }
  bool lossless() const;
  /// sup{|x2| : x in any support}; 0 for an empty scene.
  double support_height() const;

 private:
  MediumParams params_;
  std::vector<SceneShape> shapes_;
};

cplx contrast_at(const Scene& scene, Point p);
ComplexField rasterize(const Scene& scene, const Grid2D& grid);

/// Throws ParseError (with line/column) or ValidationError (with cause).
Scene parse_scene(const std::string& text);
Scene load_scene_file(const std::string& path);

/// Serializes a scene back to the configuration format.
std::string format_scene(const Scene& scene);

}  // namespace qpscat
