#include "filmctl/gain_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "filmctl/errors.hpp"

namespace filmctl {

namespace {

constexpr const char* kMagic = "filmctl-gain";

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) throw IoError("gain file: bad number for " + what);
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw IoError("gain file: bad integer for " + what);
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_gain(std::ostream& out, const GainMatrix& g, const std::vector<std::string>& comments) {
  const auto& m = g.meta;
  out << kMagic << '\n';
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "version = " << kGainFormatVersion << '\n';
  out << "model = " << to_string(m.model) << '\n';
  out << "reduced = " << (m.reduced ? 1 : 0) << '\n';
  out << "reynolds = " << exact(m.params.reynolds) << '\n';
  out << "capillary = " << exact(m.params.capillary) << '\n';
  out << "theta = " << exact(m.params.theta) << '\n';
  out << "aspect = " << exact(m.params.aspect) << '\n';
  out << "grid_points = " << m.grid_points << '\n';
  out << "actuators = " << m.actuators << '\n';
  out << "width = " << exact(m.width) << '\n';
  out << "beta = " << exact(m.beta) << '\n';
  out << "solver = " << m.solver << '\n';
  out << "rows = " << g.k.rows() << '\n';
  out << "cols = " << g.k.cols() << '\n';
  out << "data\n";
  for (Eigen::Index r = 0; r < g.k.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.k.cols(); ++c) {
      if (c > 0) out << ' ';
      out << exact(g.k(r, c));
    }
    out << '\n';
  }
}

GainMatrix read_gain(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kMagic) throw IoError("not a gain file");

  std::map<std::string, std::string> header;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line == "data") break;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("gain file: malformed header line '" + line + "'");
    header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw IoError("gain file: missing header key '" + key + "'");
    return it->second;
  };

  if (parse_int(get("version"), "version") != kGainFormatVersion) {
    throw IoError("gain file: unsupported format version");
  }
  GainMatrix g;
  try {
    g.meta.model = parse_model(get("model"));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("gain file: ") + e.what());
  }
  g.meta.reduced = parse_int(get("reduced"), "reduced") != 0;
  g.meta.params.reynolds = parse_double(get("reynolds"), "reynolds");
  g.meta.params.capillary = parse_double(get("capillary"), "capillary");
  g.meta.params.theta = parse_double(get("theta"), "theta");
  g.meta.params.aspect = parse_double(get("aspect"), "aspect");
  g.meta.grid_points = parse_int(get("grid_points"), "grid_points");
  g.meta.actuators = parse_int(get("actuators"), "actuators");
  g.meta.width = parse_double(get("width"), "width");
  g.meta.beta = parse_double(get("beta"), "beta");
  g.meta.solver = get("solver");
  const int rows = parse_int(get("rows"), "rows");
  const int cols = parse_int(get("cols"), "cols");
  if (rows < 0 || cols < 0 || rows != g.meta.actuators) throw IoError("gain file: bad dimensions");

  g.k.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw IoError("gain file: truncated data");
    std::istringstream ls(line);
    std::string token;
    for (int c = 0; c < cols; ++c) {
      if (!(ls >> token)) throw IoError("gain file: short row " + std::to_string(r));
      g.k(r, c) = parse_double(token, "entry");
    }
    if (ls >> token) throw IoError("gain file: long row " + std::to_string(r));
  }
  return g;
}

void write_gain_file(const std::filesystem::path& path, const GainMatrix& gain,
                     const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_gain(out, gain, comments);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

GainMatrix read_gain_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_gain(in);
}

}  // namespace filmctl
