// Mode arithmetic, medium parameters, grids and the Rayleigh data model.
//
// Conventions used throughout the library:
//   * the period is 2*pi in x1; fields are alpha-quasiperiodic,
//     f(x1 + 2*pi, x2) = exp(i*2*pi*alpha) f(x1, x2);
//   * alpha_j = alpha + j and beta_j = sqrt(k^2 - alpha_j^2) for propagating
//     modes, beta_j = i*sqrt(alpha_j^2 - k^2) for evanescent ones;
//   * the upward Rayleigh expansion is referenced to x2 = h and the
//     downward one to x2 = -h.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qpscat {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kPeriod = kTwoPi;

enum class ErrorCode {
  kInvalidArgument,
  kNonPositiveWaveNumber,
  kWoodAnomalyProximity,
  kBadGeometry,
  kTooCloseVertically,
  kSingularPoint,
  kParseError,
  kValidationError,
  kSourceInsideSlab,
  kSolverDiverged,
  kResonantDiscretization,
  kAliasedMode,
  kLossyScene,
  kEmptyScene,
  kMissingInput,
  kIoError,
};

const char* error_code_name(ErrorCode code);

/// Library exception. `detail` carries structured context (offending mode
/// index, line/column, nested cause) for machine-readable error reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, std::string detail_json)
      : std::runtime_error(message), code_(code), detail_(std::move(detail_json)) {}

  ErrorCode code() const noexcept { return code_; }
  /// JSON object text with extra fields, empty when none.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline double distance(Point a, Point b) {
  const double d1 = a.x1 - b.x1;
  const double d2 = a.x2 - b.x2;
  return std::sqrt(d1 * d1 + d2 * d2);
}

struct Mode {
  int j = 0;
  double alpha_j = 0.0;
  cplx beta_j;

  bool propagating() const { return beta_j.imag() == 0.0; }
};

/// Default relative Wood-anomaly guard: min_j |k^2 - alpha_j^2| >= 1e-6 k^2.
inline constexpr double kDefaultWoodTolRel = 1e-6;

/// Validated physical parameters of the periodic medium.
class MediumParams {
 public:
  double k() const { return k_; }
  double alpha() const { return alpha_; }
  double h() const { return h_; }
  double r_meas() const { return r_meas_; }
  double period() const { return kPeriod; }
  double wood_tol() const { return wood_tol_; }

  Mode mode(int j) const;

  /// {j : k^2 > alpha_j^2}, ascending.
  std::vector<int> propagating_set() const;

  /// Stored modal window: all j with |alpha_j| <= k + 8/h.
  int window_min() const { return window_min_; }
  int window_max() const { return window_max_; }

  friend MediumParams make_params(double k, double alpha, double h, double r_meas,
                                  double wood_tol_rel);

 private:
  MediumParams() = default;

  double k_ = 0.0;
  double alpha_ = 0.0;
  double h_ = 0.0;
  double r_meas_ = 0.0;
  double wood_tol_ = 0.0;
  int window_min_ = 0;
  int window_max_ = 0;
};

/// Throws NonPositiveWaveNumber, BadGeometry or WoodAnomalyProximity.
MediumParams make_params(double k, double alpha, double h, double r_meas,
                         double wood_tol_rel = kDefaultWoodTolRel);

/// beta_j for a given k and alpha_j, branch chosen exactly at k^2 = alpha_j^2.
cplx beta_of(double k, double alpha_j);

/// Uniform cell-centered grid: node (i1, i2) sits at
/// (x1_min + (i1 + 1/2) d1, x2_min + (i2 + 1/2) d2).
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(double x1_min, double x1_max, double x2_min, double x2_max, int n1, int n2);

  double x1_min() const { return x1_min_; }
  double x1_max() const { return x1_max_; }
  double x2_min() const { return x2_min_; }
  double x2_max() const { return x2_max_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double d1() const { return (x1_max_ - x1_min_) / n1_; }
  double d2() const { return (x2_max_ - x2_min_) / n2_; }
  double cell_area() const { return d1() * d2(); }
  std::size_t size() const { return static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_); }

  double x1(int i1) const { return x1_min_ + (i1 + 0.5) * d1(); }
  double x2(int i2) const { return x2_min_ + (i2 + 0.5) * d2(); }
  Point point(int i1, int i2) const { return {x1(i1), x2(i2)}; }

  /// Storage is x2-major: index = i2 * n1 + i1.
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i2) * static_cast<std::size_t>(n1_) + static_cast<std::size_t>(i1);
  }
  std::pair<int, int> indices(std::size_t idx) const {
    return {static_cast<int>(idx % static_cast<std::size_t>(n1_)),
            static_cast<int>(idx / static_cast<std::size_t>(n1_))};
  }
  /// Nearest node to a coordinate, clamped to the grid.
  std::pair<int, int> nearest(Point p) const;

  bool operator==(const Grid2D&) const = default;

 private:
  double x1_min_ = -kPi;
  double x1_max_ = kPi;
  double x2_min_ = -1.0;
  double x2_max_ = 1.0;
  int n1_ = 2;
  int n2_ = 2;
};

/// Parses "N1xN2".
std::pair<int, int> parse_grid_dims(const std::string& text);

struct ComplexField {
  Grid2D grid;
  std::vector<cplx> values;

  ComplexField() = default;
  explicit ComplexField(const Grid2D& g) : grid(g), values(g.size()) {}

  cplx& at(int i1, int i2) { return values[grid.index(i1, i2)]; }
  const cplx& at(int i1, int i2) const { return values[grid.index(i1, i2)]; }
};

enum class SourceKind { kPointSource, kPlaneWaveDown, kPlaneWaveUp };

struct SourceDescriptor {
  int id = 0;
  SourceKind kind = SourceKind::kPointSource;
  Point position;  // meaningful for point sources only
};

struct CoeffPair {
  cplx plus;
  cplx minus;
};

/// Rayleigh coefficients (u_j^+, u_j^-) of the scattered fields for an
/// ordered list of sources, stored over a contiguous index window.
class RayleighData {
 public:
  RayleighData(const MediumParams& params, int j_min, int j_max);

  const MediumParams& params() const { return params_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  std::size_t window_size() const { return static_cast<std::size_t>(j_max_ - j_min_ + 1); }
  const std::vector<int>& prop_set() const { return prop_set_; }
  std::size_t n_sources() const { return sources_.size(); }
  const std::vector<SourceDescriptor>& sources() const { return sources_; }

  /// Appends a source with all coefficients zero; returns its position.
  std::size_t add_source(const SourceDescriptor& src);

  CoeffPair& coeff(std::size_t source, int j);
  const CoeffPair& coeff(std::size_t source, int j) const;
  bool in_window(int j) const { return j >= j_min_ && j <= j_max_; }

  /// Appends every source of `other` (same params and window required).
  void append(const RayleighData& other);

 private:
  MediumParams params_;
  int j_min_;
  int j_max_;
  std::vector<int> prop_set_;
  std::vector<SourceDescriptor> sources_;
  std::vector<std::vector<CoeffPair>> coeffs_;
};

}  // namespace qpscat
