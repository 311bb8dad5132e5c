#include "qpscat/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qpscat {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveWaveNumber: return "NonPositiveWaveNumber";
    case ErrorCode::kWoodAnomalyProximity: return "WoodAnomalyProximity";
    case ErrorCode::kBadGeometry: return "BadGeometry";
    case ErrorCode::kTooCloseVertically: return "TooCloseVertically";
    case ErrorCode::kSingularPoint: return "SingularPoint";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kSourceInsideSlab: return "SourceInsideSlab";
    case ErrorCode::kSolverDiverged: return "SolverDiverged";
    case ErrorCode::kResonantDiscretization: return "ResonantDiscretization";
    case ErrorCode::kAliasedMode: return "AliasedMode";
    case ErrorCode::kLossyScene: return "LossyScene";
    case ErrorCode::kEmptyScene: return "EmptyScene";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

cplx beta_of(double k, double alpha_j) {
  const double d = k * k - alpha_j * alpha_j;
  if (d >= 0.0) return {std::sqrt(d), 0.0};
  return {0.0, std::sqrt(-d)};
}

MediumParams make_params(double k, double alpha, double h, double r_meas, double wood_tol_rel) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::kNonPositiveWaveNumber, "wave number must be positive and finite");
  }
  if (!std::isfinite(alpha)) throw Error(ErrorCode::kInvalidArgument, "alpha must be finite");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::kBadGeometry, "support half-height h must be positive");
  }
  if (!(r_meas >= h) || !std::isfinite(r_meas)) {
    throw Error(ErrorCode::kBadGeometry, "measurement height r_meas must be >= h");
  }
  if (!(wood_tol_rel >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "wood tolerance must be >= 0");

  // beta_j vanishes only near alpha + j = +-k.
  const double tol = wood_tol_rel * k * k;
  const double centers[] = {k - alpha, -k - alpha};
  for (double c : centers) {
    for (double cand : {std::floor(c), std::ceil(c)}) {
      const int j = static_cast<int>(cand);
      const double aj = alpha + j;
      if (std::abs(k * k - aj * aj) < tol) {
        std::ostringstream msg;
        msg << "Wood anomaly: |k^2 - alpha_j^2| = " << std::abs(k * k - aj * aj) << " < " << tol
            << " for j = " << j;
        throw Error(ErrorCode::kWoodAnomalyProximity, msg.str(),
                    "{\"j\": " + std::to_string(j) + "}");
      }
    }
  }

  MediumParams p;
  p.k_ = k;
  p.alpha_ = alpha;
  p.h_ = h;
  p.r_meas_ = r_meas;
  p.wood_tol_ = tol;
  const double reach = k + 8.0 / h;
  p.window_min_ = static_cast<int>(std::ceil(-reach - alpha));
  p.window_max_ = static_cast<int>(std::floor(reach - alpha));
  return p;
}

Mode MediumParams::mode(int j) const {
  Mode m;
  m.j = j;
  m.alpha_j = alpha_ + j;
  m.beta_j = beta_of(k_, m.alpha_j);
  return m;
}

std::vector<int> MediumParams::propagating_set() const {
  std::vector<int> out;
  const int lo = static_cast<int>(std::floor(-k_ - alpha_)) - 1;
  const int hi = static_cast<int>(std::ceil(k_ - alpha_)) + 1;
  for (int j = lo; j <= hi; ++j) {
    const double aj = alpha_ + j;
    if (k_ * k_ > aj * aj) out.push_back(j);
  }
  return out;
}

Grid2D::Grid2D(double x1_min, double x1_max, double x2_min, double x2_max, int n1, int n2)
    : x1_min_(x1_min), x1_max_(x1_max), x2_min_(x2_min), x2_max_(x2_max), n1_(n1), n2_(n2) {
  if (!(x1_min < x1_max) || !(x2_min < x2_max)) {
    throw Error(ErrorCode::kInvalidArgument, "grid bounds must satisfy min < max");
  }
  if (n1 < 2 || n2 < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 points per axis");
}

std::pair<int, int> Grid2D::nearest(Point p) const {
  auto clampi = [](double v, int n) {
    const int i = static_cast<int>(std::floor(v));
    return std::clamp(i, 0, n - 1);
  };
  return {clampi((p.x1 - x1_min_) / d1(), n1_), clampi((p.x2 - x2_min_) / d2(), n2_)};
}

std::pair<int, int> parse_grid_dims(const std::string& text) {
  const auto pos = text.find_first_of("xX");
  if (pos == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "grid must be written as N1xN2, got '" + text + "'");
  }
  try {
    std::size_t used1 = 0;
    std::size_t used2 = 0;
    const std::string a = text.substr(0, pos);
    const std::string b = text.substr(pos + 1);
    const int n1 = std::stoi(a, &used1);
    const int n2 = std::stoi(b, &used2);
    if (used1 != a.size() || used2 != b.size() || n1 < 2 || n2 < 2) throw std::invalid_argument("dims");
    return {n1, n2};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "grid must be written as N1xN2, got '" + text + "'");
  }
}

RayleighData::RayleighData(const MediumParams& params, int j_min, int j_max)
    : params_(params), j_min_(j_min), j_max_(j_max), prop_set_(params.propagating_set()) {
  if (j_max < j_min) throw Error(ErrorCode::kInvalidArgument, "empty Rayleigh window");
  if (prop_set_.empty() || prop_set_.front() < j_min || prop_set_.back() > j_max) {
    throw Error(ErrorCode::kInvalidArgument, "Rayleigh window must contain every propagating mode");
  }
}

std::size_t RayleighData::add_source(const SourceDescriptor& src) {
  sources_.push_back(src);
  coeffs_.emplace_back(window_size());
  return sources_.size() - 1;
}

CoeffPair& RayleighData::coeff(std::size_t source, int j) {
  if (source >= coeffs_.size() || !in_window(j)) {
    throw Error(ErrorCode::kInvalidArgument, "coefficient index out of range");
  }
  return coeffs_[source][static_cast<std::size_t>(j - j_min_)];
}

const CoeffPair& RayleighData::coeff(std::size_t source, int j) const {
  if (source >= coeffs_.size() || !in_window(j)) {
    throw Error(ErrorCode::kInvalidArgument, "coefficient index out of range");
  }
  return coeffs_[source][static_cast<std::size_t>(j - j_min_)];
}

void RayleighData::append(const RayleighData& other) {
  if (other.j_min_ != j_min_ || other.j_max_ != j_max_ || other.params_.k() != params_.k() ||
      other.params_.alpha() != params_.alpha() || other.params_.h() != params_.h()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot merge Rayleigh data with different params/window");
  }
  for (std::size_t s = 0; s < other.sources_.size(); ++s) {
    sources_.push_back(other.sources_[s]);
    coeffs_.push_back(other.coeffs_[s]);
  }
}

}  // namespace qpscat
