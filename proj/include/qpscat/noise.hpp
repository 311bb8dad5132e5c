// Multiplicative noise on propagating Rayleigh coefficients.
#pragma once

#include "qpscat/core.hpp"

#include <cstdint>

namespace qpscat {

struct NoiseSpec {
  double delta = 0.0;     // relative level, 0 <= delta < 1
  std::uint64_t seed = 0;
};

struct NoisyData {
  RayleighData data;
  /// sum_l ||noise_l|| / sum_l ||clean_l||, norms taken on Gamma_{+-h} via Parseval.
  double achieved_delta = 0.0;
};

/// Every propagating coefficient c becomes c (1 + delta zeta) with zeta
/// uniform on the complex unit disc; evanescent coefficients pass through.
/// Draws for source l depend only on (seed, source id).
NoisyData perturb(const RayleighData& data, const NoiseSpec& spec);

/// Per-source sub-seed.
std::uint64_t source_seed(std::uint64_t seed, int source_id);

/// L2(Gamma_h u Gamma_-h) norm of the propagating part of one source's field.
double trace_norm(const RayleighData& data, std::size_t source);

}  // namespace qpscat
