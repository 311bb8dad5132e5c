#include "qpscat/noise.hpp"

#include <cmath>

namespace qpscat {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

cplx unit_disc(std::uint64_t& state) {
  const double radius = std::sqrt(unit_uniform(state));
  const double angle = kTwoPi * unit_uniform(state);
  return std::polar(radius, angle);
}

}  // namespace

std::uint64_t source_seed(std::uint64_t seed, int source_id) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(source_id)) * 0xD1B54A32D192ED03ULL);
  return splitmix64(t);
}

double trace_norm(const RayleighData& data, std::size_t source) {
  double s = 0.0;
  for (int j : data.prop_set()) {
    const CoeffPair& c = data.coeff(source, j);
    s += std::norm(c.plus) + std::norm(c.minus);
  }
  return std::sqrt(kTwoPi * s);
}

NoisyData perturb(const RayleighData& data, const NoiseSpec& spec) {
  if (!(spec.delta >= 0.0 && spec.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise level delta must lie in [0, 1)");
  }
  NoisyData out{data, 0.0};
  if (spec.delta == 0.0) return out;
  double noise_sum = 0.0;
  double clean_sum = 0.0;
  for (std::size_t l = 0; l < data.n_sources(); ++l) {
    std::uint64_t state = source_seed(spec.seed, data.sources()[l].id);
    double diff = 0.0;
    for (int j : data.prop_set()) {
      const CoeffPair& c = data.coeff(l, j);
      const cplx zp = unit_disc(state);
      const cplx zm = unit_disc(state);
      const cplx dp = c.plus * (spec.delta * zp);
      const cplx dm = c.minus * (spec.delta * zm);
      out.data.coeff(l, j) = {c.plus + dp, c.minus + dm};
      diff += std::norm(dp) + std::norm(dm);
    }
    noise_sum += std::sqrt(kTwoPi * diff);
    clean_sum += trace_norm(data, l);
  }
  out.achieved_delta = clean_sum > 0.0 ? noise_sum / clean_sum : 0.0;
  return out;
}

}  // namespace qpscat
