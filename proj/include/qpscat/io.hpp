// File formats.
//
// Rayleigh data (CSV):
//   # k alpha h r_meas n_sources
//   # <k> <alpha> <h> <r_meas> <n_sources>
//   source_id, j, re_uplus, im_uplus, re_uminus, im_uminus
//   ...one row per (source, j) over the stored window
//
// Trace (CSV): source_id, boundary(+|-), index, x1, re, im
//
// Indicator map (CSV):
//   # n1 n2 x1min x1max x2min x2max method p
//   # <values of the above>
//   n2 rows of n1 normalized values (row i2 holds x2 = x2(i2))
//
// Indicator image: binary 16-bit PGM (P5, maxval 65535, big-endian),
// value = round(65535 * normalized), first image row = largest x2.
#pragma once

#include "qpscat/core.hpp"
#include "qpscat/forward.hpp"
#include "qpscat/imaging.hpp"

#include <string>
#include <vector>

namespace qpscat::io {

std::string format_rayleigh_csv(const RayleighData& data);
/// Throws MissingInput when unreadable, InvalidArgument when malformed.
RayleighData parse_rayleigh_csv(const std::string& text);

std::string format_trace_csv(const std::vector<std::pair<int, Trace>>& traces);

std::string format_map_csv(const IndicatorMap& map);
/// Grid values with the header `# n1 n2 x1min x1max x2min x2max <extra_names>`.
std::string format_grid_csv(const Grid2D& g, const std::vector<double>& values, const std::string& extra_names,
                            const std::string& extra_values);
std::string format_pgm16(const std::vector<double>& normalized, int n1, int n2);

/// Writes to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

/// Shortest text that round-trips the double exactly.
std::string fmt_double(double v);

}  // namespace qpscat::io
