#include "qpscat/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qpscat::io {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    throw Error(ErrorCode::kInvalidArgument, "Rayleigh CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

std::string format_rayleigh_csv(const RayleighData& data) {
  const MediumParams& p = data.params();
  std::string out;
  out += "# k alpha h r_meas n_sources\n";
  out += "# " + fmt_double(p.k()) + " " + fmt_double(p.alpha()) + " " + fmt_double(p.h()) + " " +
         fmt_double(p.r_meas()) + " " + std::to_string(data.n_sources()) + "\n";
  for (std::size_t l = 0; l < data.n_sources(); ++l) {
    const std::string sid = std::to_string(data.sources()[l].id);
    for (int j = data.j_min(); j <= data.j_max(); ++j) {
      const CoeffPair& c = data.coeff(l, j);
      out += sid + ", " + std::to_string(j) + ", " + fmt_double(c.plus.real()) + ", " + fmt_double(c.plus.imag()) +
             ", " + fmt_double(c.minus.real()) + ", " + fmt_double(c.minus.imag()) + "\n";
    }
  }
  return out;
}

RayleighData parse_rayleigh_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<double> header;
  struct Row {
    int sid;
    int j;
    CoeffPair c;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      if (line_no == 2) {
        std::istringstream hs(line.substr(1));
        double v = 0.0;
        while (hs >> v) header.push_back(v);
      }
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 6) {
      throw Error(ErrorCode::kInvalidArgument, "Rayleigh CSV line " + std::to_string(line_no) + ": expected 6 fields");
    }
    Row r;
    r.sid = static_cast<int>(parse_double(f[0], line_no));
    r.j = static_cast<int>(parse_double(f[1], line_no));
    r.c.plus = {parse_double(f[2], line_no), parse_double(f[3], line_no)};
    r.c.minus = {parse_double(f[4], line_no), parse_double(f[5], line_no)};
    rows.push_back(r);
  }
  if (header.size() != 5) {
    throw Error(ErrorCode::kInvalidArgument, "Rayleigh CSV needs the header '# k alpha h r_meas n_sources' + values");
  }
  const MediumParams params = make_params(header[0], header[1], header[2], header[3]);
  const auto n_sources = static_cast<std::size_t>(header[4]);
  int j_min = params.window_min();
  int j_max = params.window_max();
  if (!rows.empty()) {
    j_min = rows.front().j;
    j_max = rows.front().j;
    for (const auto& r : rows) {
      j_min = std::min(j_min, r.j);
      j_max = std::max(j_max, r.j);
    }
  }
  RayleighData data(params, j_min, j_max);
  std::map<int, std::size_t> slot;
  for (const auto& r : rows) {
    auto it = slot.find(r.sid);
    if (it == slot.end()) {
      SourceDescriptor d;
      d.id = r.sid;
      it = slot.emplace(r.sid, data.add_source(d)).first;
    }
    data.coeff(it->second, r.j) = r.c;
  }
  if (data.n_sources() != n_sources) {
    throw Error(ErrorCode::kInvalidArgument, "Rayleigh CSV header announces " + std::to_string(n_sources) +
                                                 " sources but rows describe " + std::to_string(data.n_sources()));
  }
  return data;
}

std::string format_trace_csv(const std::vector<std::pair<int, Trace>>& traces) {
  std::string out = "# source_id, boundary, index, x1, re, im\n";
  for (const auto& [sid, t] : traces) {
    for (const auto& [sign, vals] : {std::pair{'+', &t.plus}, std::pair{'-', &t.minus}}) {
      for (std::size_t i = 0; i < t.x1.size(); ++i) {
        out += std::to_string(sid) + ", " + sign + ", " + std::to_string(i) + ", " + fmt_double(t.x1[i]) + ", " +
               fmt_double((*vals)[i].real()) + ", " + fmt_double((*vals)[i].imag()) + "\n";
      }
    }
  }
  return out;
}

std::string format_grid_csv(const Grid2D& g, const std::vector<double>& values, const std::string& extra_names,
                            const std::string& extra_values) {
  std::string out = "# n1 n2 x1min x1max x2min x2max";
  if (!extra_names.empty()) out += " " + extra_names;
  out += "\n# " + std::to_string(g.n1()) + " " + std::to_string(g.n2()) + " " + fmt_double(g.x1_min()) + " " +
         fmt_double(g.x1_max()) + " " + fmt_double(g.x2_min()) + " " + fmt_double(g.x2_max());
  if (!extra_values.empty()) out += " " + extra_values;
  out += "\n";
  for (int i2 = 0; i2 < g.n2(); ++i2) {
    for (int i1 = 0; i1 < g.n1(); ++i1) {
      if (i1) out += ",";
      out += fmt_double(values[g.index(i1, i2)]);
    }
    out += "\n";
  }
  return out;
}

std::string format_map_csv(const IndicatorMap& map) {
  return format_grid_csv(map.grid, map.normalized(), "method p",
                         std::string(method_name(map.method)) + " " + std::to_string(map.p));
}

std::string format_pgm16(const std::vector<double>& normalized, int n1, int n2) {
  std::string out = "P5\n" + std::to_string(n1) + " " + std::to_string(n2) + "\n65535\n";
  out.reserve(out.size() + normalized.size() * 2);
  for (int r = 0; r < n2; ++r) {
    const int i2 = n2 - 1 - r;
    for (int i1 = 0; i1 < n1; ++i1) {
      double v = normalized[static_cast<std::size_t>(i2) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(i1)];
      v = std::min(1.0, std::max(0.0, v));
      const auto px = static_cast<unsigned>(std::lround(65535.0 * v));
      out.push_back(static_cast<char>((px >> 8) & 0xFF));
      out.push_back(static_cast<char>(px & 0xFF));
    }
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIoError, "cannot write '" + tmp.string() + "'");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw Error(ErrorCode::kIoError, "short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kMissingInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) { return fs::exists(path); }

}  // namespace qpscat::io
