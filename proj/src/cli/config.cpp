#include "filmctl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "filmctl/errors.hpp"

namespace filmctl {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string unquote(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  if (!v.empty() && (v.front() == '"' || v.back() == '"')) throw ConfigError(std::string(key), "unbalanced quotes");
  return std::string(v);
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s = unquote(key, text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(std::string(key), "expected a number, got '" + s + "'");
  return v;
}

long long to_integer(std::string_view key, std::string_view text) {
  const std::string s = unquote(key, text);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError(std::string(key), "expected an integer, got '" + s + "'");
  return v;
}

int to_int(std::string_view key, std::string_view text) {
  const long long v = to_integer(key, text);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(std::string(key), "integer out of range");
  return static_cast<int>(v);
}

bool to_bool(std::string_view key, std::string_view text) {
  const std::string s = unquote(key, text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + s + "'");
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::string_view v = trim(text);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ConfigError(std::string(key), "unterminated list");
    v = trim(v.substr(1, v.size() - 2));
  }
  std::vector<double> out;
  if (v.empty()) return out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string list_text(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  return s + "]";
}

Model to_model(std::string_view key, std::string_view text) {
  try {
    return parse_model(unquote(key, text));
  } catch (const InvalidArgument&) {
    throw ConfigError(std::string(key), "unknown model '" + unquote(key, text) + "' (benney | wr)");
  }
}

struct Entry {
  std::function<void(RunConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Table = std::vector<std::pair<std::string, Entry>>;

#define NUM(field) \
  Entry{[](RunConfig& c, std::string_view k, std::string_view v) { c.field = to_double(k, v); }, \
        [](const RunConfig& c) { return format_number(c.field); }}
#define INT(field) \
  Entry{[](RunConfig& c, std::string_view k, std::string_view v) { c.field = to_int(k, v); }, \
        [](const RunConfig& c) { return std::to_string(c.field); }}

const Table& table() {
  static const Table t = {
      {"parameters.preset",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string name = unquote(k, v);
          if (name.empty()) {
            c.preset.clear();
            return;
          }
          const auto fluid = find_preset(name);
          if (!fluid) throw ConfigError(std::string(k), "unknown preset '" + name + "'");
          const FlowParameters p = from_physical(*fluid, c.params.aspect);
          c.preset = name;
          c.params.reynolds = p.reynolds;
          c.params.capillary = p.capillary;
          c.params.theta = p.theta;
        },
        [](const RunConfig& c) { return quoted(c.preset); }}},
      {"parameters.reynolds", NUM(params.reynolds)},
      {"parameters.capillary", NUM(params.capillary)},
      {"parameters.theta", NUM(params.theta)},
      {"parameters.aspect", NUM(params.aspect)},
      {"grid.points", INT(grid_points)},
      {"actuators.count", INT(actuator_count)},
      {"actuators.width", NUM(actuator_width)},
      {"control.design_model",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.design_model = to_model(k, v); },
        [](const RunConfig& c) { return quoted(std::string(to_string(c.design_model))); }}},
      {"control.controlled_model",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.controlled_model = to_model(k, v); },
        [](const RunConfig& c) { return quoted(std::string(to_string(c.controlled_model))); }}},
      {"control.beta", NUM(beta)},
      {"control.activation_time", NUM(activation_time)},
      {"control.gain_method",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = unquote(k, v);
          if (s == "lqr") c.gain_method = GainMethod::Lqr;
          else if (s == "fourier") c.gain_method = GainMethod::Fourier;
          else throw ConfigError(std::string(k), "expected lqr or fourier, got '" + s + "'");
        },
        [](const RunConfig& c) { return quoted(c.gain_method == GainMethod::Lqr ? "lqr" : "fourier"); }}},
      {"control.reduce_gain",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.reduce_gain = to_bool(k, v); },
        [](const RunConfig& c) { return std::string(c.reduce_gain ? "true" : "false"); }}},
      {"solver.dt", NUM(solver.dt_max)},
      {"solver.newton_tol", NUM(solver.newton_tol)},
      {"solver.newton_max_iter", INT(solver.newton_max_iter)},
      {"solver.blowup_threshold", NUM(solver.blowup_threshold)},
      {"simulation.initial",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = unquote(k, v);
          if (s != "single" && s != "multi") throw ConfigError(std::string(k), "expected single or multi, got '" + s + "'");
          c.initial = s;
        },
        [](const RunConfig& c) { return quoted(c.initial); }}},
      {"simulation.amplitude", NUM(amplitude)},
      {"simulation.mode", INT(mode)},
      {"simulation.modes", INT(modes)},
      {"simulation.seed",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const long long s = to_integer(k, v);
          if (s < 0) throw ConfigError(std::string(k), "seed must be >= 0");
          c.seed = static_cast<std::uint64_t>(s);
        },
        [](const RunConfig& c) { return std::to_string(c.seed); }}},
      {"simulation.t_spin", NUM(t_spin)},
      {"simulation.spin_model",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const std::string s = unquote(k, v);
          if (s != "auto" && s != "benney" && s != "wr") throw ConfigError(std::string(k), "expected auto, benney or wr");
          c.spin_model = s;
        },
        [](const RunConfig& c) { return quoted(c.spin_model); }}},
      {"simulation.t_end", NUM(t_end)},
      {"output.every", NUM(every)},
      {"dispersion.k_max", NUM(k_max)},
      {"dispersion.points", INT(k_points)},
      {"sweep.re_values",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.re_values = to_list(k, v); },
        [](const RunConfig& c) { return list_text(c.re_values); }}},
      {"sweep.ca_values",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.ca_values = to_list(k, v); },
        [](const RunConfig& c) { return list_text(c.ca_values); }}},
      {"sweep.m_max", INT(m_max)},
  };
  return t;
}

#undef NUM
#undef INT

const Entry* find_entry(std::string_view key) {
  for (const auto& [k, e] : table())
    if (k == key) return &e;
  return nullptr;
}

// Drops a trailing `#` comment that is not inside double quotes.
std::string_view strip_comment(std::string_view line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

}  // namespace

InitialCondition RunConfig::initial_condition() const {
  if (initial == "multi") return MultiMode{amplitude, seed, modes};
  return SingleMode{amplitude, mode};
}

void RunConfig::validate() const {
  auto require = [](bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(params.reynolds > 0.0, "parameters.reynolds", "must be > 0");
  require(params.capillary > 0.0, "parameters.capillary", "must be > 0");
  require(params.theta > 0.0 && params.theta < std::acos(0.0), "parameters.theta", "must lie in (0, pi/2)");
  require(params.aspect > 0.0, "parameters.aspect", "must be > 0");
  require(grid_points >= 8 && grid_points % 2 == 0, "grid.points", "must be even and >= 8");
  require(actuator_count >= 1, "actuators.count", "must be >= 1");
  require(actuator_width > 0.0, "actuators.width", "must be > 0");
  require(beta > 0.0 && beta < 1.0, "control.beta", "must lie in (0, 1)");
  require(activation_time >= 0.0, "control.activation_time", "must be >= 0");
  require(solver.dt_max > 0.0, "solver.dt", "must be > 0");
  require(solver.newton_tol > 0.0, "solver.newton_tol", "must be > 0");
  require(solver.newton_max_iter >= 1, "solver.newton_max_iter", "must be >= 1");
  require(solver.blowup_threshold > 1.0, "solver.blowup_threshold", "must be > 1");
  require(amplitude > 0.0, "simulation.amplitude", "must be > 0");
  require(mode >= 1 && mode < grid_points / 2, "simulation.mode", "must lie in [1, N/2)");
  require(modes >= 1 && modes < grid_points / 2, "simulation.modes", "must lie in [1, N/2)");
  require(t_spin >= 0.0, "simulation.t_spin", "must be >= 0");
  require(t_end > 0.0, "simulation.t_end", "must be > 0");
  require(every >= 0.0, "output.every", "must be >= 0");
  require(k_max > 0.0, "dispersion.k_max", "must be > 0");
  require(k_points >= 2, "dispersion.points", "must be >= 2");
  require(!re_values.empty(), "sweep.re_values", "must not be empty");
  require(!ca_values.empty(), "sweep.ca_values", "must not be empty");
  for (double v : re_values) require(v > 0.0, "sweep.re_values", "entries must be > 0");
  for (double v : ca_values) require(v > 0.0, "sweep.ca_values", "entries must be > 0");
  require(m_max >= 1, "sweep.m_max", "must be >= 1");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const Entry* e = find_entry(trim(key));
  if (!e) throw ConfigError(std::string(trim(key)), "unknown key");
  e->set(config, trim(key), value);
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "missing key");
    apply_setting(config, key, line.substr(eq + 1));
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  apply_config_text(c, text);
  c.validate();
  return c;
}

std::string write_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [key, entry] : table()) {
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) out += '\n';
      out += "# " + sec + '\n';
      section = sec;
    }
    out += key + " = " + entry.get(config) + '\n';
  }
  return out;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : write_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, e] : table()) k.push_back(key);
    return k;
  }();
  return keys;
}

}  // namespace filmctl
