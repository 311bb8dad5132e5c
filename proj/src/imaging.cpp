#include "qpscat/imaging.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace qpscat {

namespace {

constexpr cplx kI{0.0, 1.0};

struct PropMode {
  int j;
  double alpha_j;
  double beta_j;
  double weight;  // beta_j or 1
};

std::vector<PropMode> prop_modes(const MediumParams& params, const std::vector<int>& prop, IndicatorMethod method) {
  std::vector<PropMode> out;
  out.reserve(prop.size());
  for (int j : prop) {
    const Mode m = params.mode(j);
    const double b = m.beta_j.real();
    out.push_back({j, m.alpha_j, b, method == IndicatorMethod::kProposed ? b : 1.0});
  }
  return out;
}

// conj(g_j^{+-}(z)) = -i / (4 pi beta_j) exp(i alpha_j z1) exp(+-i beta_j (z2 -+ h)) for real beta_j,
// so w_j (u^+ conj g^+ + u^- conj g^-) = col(z1) * row(z2).
cplx row_factor(const CoeffPair& u, const PropMode& m, double z2, double h) {
  const cplx pre = -kI * (m.weight / (4.0 * kPi * m.beta_j));
  return pre * (u.plus * std::exp(kI * (m.beta_j * (z2 - h))) + u.minus * std::exp(-kI * (m.beta_j * (z2 + h))));
}

cplx col_factor(const PropMode& m, double z1) { return std::exp(kI * (m.alpha_j * z1)); }

double pow_int(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// Order-independent reduction: contributions are summed in ascending order.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double indicator_at(const RayleighData& data, Point z, int p, IndicatorMethod method) {
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "indicator exponent p must be >= 1");
  const auto modes = prop_modes(data.params(), data.prop_set(), method);
  std::vector<double> terms(data.n_sources());
  for (std::size_t l = 0; l < data.n_sources(); ++l) {
    cplx s{0.0, 0.0};
    for (const PropMode& m : modes) s += col_factor(m, z.x1) * row_factor(data.coeff(l, m.j), m, z.x2, data.params().h());
    terms[l] = pow_int(std::abs(s), p);
  }
  return sorted_sum(terms);
}

}  // namespace

const char* method_name(IndicatorMethod m) { return m == IndicatorMethod::kProposed ? "proposed" : "osm"; }

IndicatorMethod parse_method(const std::string& name) {
  if (name == "proposed") return IndicatorMethod::kProposed;
  if (name == "osm") return IndicatorMethod::kOsm;
  throw Error(ErrorCode::kInvalidArgument, "unknown indicator method '" + name + "' (expected proposed|osm)");
}

std::vector<double> IndicatorMap::normalized() const {
  std::vector<double> out(values.size(), 0.0);
  if (max_value > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / max_value;
  }
  return out;
}

cplx indicator_inner_sum(const RayleighData& data, std::size_t source, Point z, IndicatorMethod method) {
  const auto modes = prop_modes(data.params(), data.prop_set(), method);
  cplx s{0.0, 0.0};
  for (const PropMode& m : modes) s += col_factor(m, z.x1) * row_factor(data.coeff(source, m.j), m, z.x2, data.params().h());
  return s;
}

double indicator_point(const RayleighData& data, Point z, int p) {
  return indicator_at(data, z, p, IndicatorMethod::kProposed);
}

double indicator_osm_point(const RayleighData& data, Point z, int p) {
  return indicator_at(data, z, p, IndicatorMethod::kOsm);
}

IndicatorMap indicator_map(const RayleighData& data, const ImagingConfig& cfg) {
  if (cfg.p < 1) throw Error(ErrorCode::kInvalidArgument, "indicator exponent p must be >= 1");
  const Grid2D& g = cfg.grid;
  const double h = data.params().h();
  if (g.x2_min() < -h || g.x2_max() > h) {
    throw Error(ErrorCode::kInvalidArgument, "sampling grid must lie inside the slab |x2| <= h");
  }
  IndicatorMap map;
  map.grid = g;
  map.method = cfg.method;
  map.p = cfg.p;
  map.values.assign(g.size(), 0.0);
  const auto modes = prop_modes(data.params(), data.prop_set(), cfg.method);
  const std::size_t nm = modes.size();
  const std::size_t ns = data.n_sources();

  std::vector<cplx> cols(static_cast<std::size_t>(g.n1()) * nm);
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    for (std::size_t t = 0; t < nm; ++t) cols[static_cast<std::size_t>(i1) * nm + t] = col_factor(modes[t], g.x1(i1));
  }

  std::atomic<int> next_row{0};
  auto worker = [&]() {
    std::vector<cplx> rows(ns * nm);
    std::vector<double> terms(ns);
    for (;;) {
      const int i2 = next_row.fetch_add(1);
      if (i2 >= g.n2()) return;
      const double z2 = g.x2(i2);
      for (std::size_t l = 0; l < ns; ++l) {
        for (std::size_t t = 0; t < nm; ++t) rows[l * nm + t] = row_factor(data.coeff(l, modes[t].j), modes[t], z2, h);
      }
      for (int i1 = 0; i1 < g.n1(); ++i1) {
        const cplx* c = &cols[static_cast<std::size_t>(i1) * nm];
        for (std::size_t l = 0; l < ns; ++l) {
          cplx s{0.0, 0.0};
          for (std::size_t t = 0; t < nm; ++t) s += c[t] * rows[l * nm + t];
          terms[l] = pow_int(std::abs(s), cfg.p);
        }
        map.values[g.index(i1, i2)] = sorted_sum(terms);
      }
    }
  };
  const unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  }
  map.max_value = *std::max_element(map.values.begin(), map.values.end());
  return map;
}

ReconstructionMetrics metrics(const IndicatorMap& map, const Scene& scene, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold fraction must lie in (0, 1)");
  }
  const Grid2D& g = map.grid;
  std::vector<char> inside(g.size(), 0);
  std::size_t n_inside = 0;
  for (int i2 = 0; i2 < g.n2(); ++i2) {
    for (int i1 = 0; i1 < g.n1(); ++i1) {
      if (contrast_at(scene, g.point(i1, i2)) != cplx{0.0, 0.0}) {
        inside[g.index(i1, i2)] = 1;
        ++n_inside;
      }
    }
  }
  if (scene.empty() || n_inside == 0) throw Error(ErrorCode::kEmptyScene, "scene has no support on the map grid");

  // Support boundary sampled on a 4x finer grid; distances are measured to it.
  const Grid2D fine(g.x1_min(), g.x1_max(), g.x2_min(), g.x2_max(), 4 * g.n1(), 4 * g.n2());
  std::vector<char> fine_in(fine.size(), 0);
  for (int i2 = 0; i2 < fine.n2(); ++i2) {
    for (int i1 = 0; i1 < fine.n1(); ++i1) {
      fine_in[fine.index(i1, i2)] = contrast_at(scene, fine.point(i1, i2)) != cplx{0.0, 0.0};
    }
  }
  std::vector<Point> boundary;
  for (int i2 = 0; i2 < fine.n2(); ++i2) {
    for (int i1 = 0; i1 < fine.n1(); ++i1) {
      if (!fine_in[fine.index(i1, i2)]) continue;
      bool edge = i1 == 0 || i2 == 0 || i1 == fine.n1() - 1 || i2 == fine.n2() - 1;
      if (!edge) {
        edge = !fine_in[fine.index(i1 - 1, i2)] || !fine_in[fine.index(i1 + 1, i2)] ||
               !fine_in[fine.index(i1, i2 - 1)] || !fine_in[fine.index(i1, i2 + 1)];
      }
      if (edge) boundary.push_back(fine.point(i1, i2));
    }
  }
  auto dist_to_support = [&](Point p, bool is_inside) {
    if (is_inside || contrast_at(scene, p) != cplx{0.0, 0.0}) return 0.0;
    double d = std::numeric_limits<double>::max();
    for (const Point& b : boundary) d = std::min(d, distance(p, b));
    return d;
  };

  ReconstructionMetrics out;
  out.max_raw = map.max_value;
  const auto norm = map.normalized();
  const std::size_t amax = static_cast<std::size_t>(std::max_element(norm.begin(), norm.end()) - norm.begin());
  const auto [a1, a2] = g.indices(amax);
  out.argmax_x1 = g.x1(a1);
  out.argmax_x2 = g.x2(a2);
  out.argmax_error = dist_to_support(g.point(a1, a2), inside[amax] != 0);

  std::size_t inter = 0;
  std::size_t uni = 0;
  double sum_in = 0.0;
  double sum_out = 0.0;
  std::size_t n_out = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool sel = norm[i] >= threshold_frac;
    const bool in = inside[i] != 0;
    inter += (sel && in) ? 1 : 0;
    uni += (sel || in) ? 1 : 0;
    if (in) {
      sum_in += norm[i];
    } else {
      const auto [i1, i2] = g.indices(i);
      if (dist_to_support(g.point(i1, i2), false) > 0.2) {
        sum_out += norm[i];
        ++n_out;
      }
    }
  }
  out.jaccard = uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
  const double mean_in = sum_in / static_cast<double>(n_inside);
  const double mean_out = n_out ? sum_out / static_cast<double>(n_out) : 0.0;
  out.contrast_ratio = mean_out > 0.0 ? mean_in / mean_out : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace qpscat
