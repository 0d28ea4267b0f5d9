#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "filmctl/actuators.hpp"
#include "filmctl/grid.hpp"
#include "filmctl/initial_condition.hpp"
#include "filmctl/interface_state.hpp"
#include "filmctl/lqr.hpp"
#include "filmctl/parameters.hpp"
#include "filmctl/time_stepper.hpp"

namespace filmctl {

inline constexpr std::string_view kVersion = "0.1.0";
/// Environment variable naming the config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "FILMCTL_CONFIG";

enum class GainMethod { Lqr, Fourier };

/// Every setting a subcommand may read. Keys are `section.name`; the
/// defaults reproduce the showcase configuration (Re = 5, Ca = 0.05,
/// theta = pi/3, L = 30, N = 256, M = 5, w = 0.1, beta = 0.5, dt = 0.05).
struct RunConfig {
  // parameters.*
  std::string preset;  // empty: use reynolds/capillary as given
  FlowParameters params{};
  // grid.*
  int grid_points = Grid::kDefaultPoints;
  // actuators.*
  int actuator_count = kDefaultActuatorCount;
  double actuator_width = kDefaultActuatorWidth;
  // control.*
  Model design_model = Model::Benney;
  Model controlled_model = Model::WeightedResidual;
  double beta = kDefaultBeta;
  double activation_time = 0.0;
  GainMethod gain_method = GainMethod::Lqr;
  bool reduce_gain = true;  // deploy weighted-residual gains on heights only
  // solver.*
  SolverConfig solver{};
  // simulation.*
  std::string initial = "single";  // single | multi
  double amplitude = 0.01;
  int mode = 1;
  int modes = 8;
  std::uint64_t seed = 1;
  double t_spin = 200.0;
  std::string spin_model = "auto";  // auto | benney | wr
  double t_end = 500.0;
  // output.*
  double every = 0.0;  // snapshot cadence in time units, 0 = none
  // dispersion.*
  double k_max = 2.0;
  int k_points = 201;
  // sweep.*
  std::vector<double> re_values{1.0, 5.0};
  std::vector<double> ca_values{0.05};
  int m_max = 8;

  [[nodiscard]] Grid grid() const { return Grid(grid_points, params.aspect); }
  [[nodiscard]] InitialCondition initial_condition() const;
  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Applies `key = value` lines to `config`. Blank lines and `#` comments
/// (whole-line or trailing) are ignored; strings may be bare or double
/// quoted; lists are `[a, b, c]` or `a, b, c`. Unknown keys, malformed lines
/// and out-of-range values raise ConfigError with the key or line number.
void apply_config_text(RunConfig& config, std::string_view text);

/// Sets one key from its textual value (used for file lines and --set).
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Parses a complete config (defaults for anything missing) and validates it.
RunConfig parse_config(std::string_view text);

/// Canonical text: every key, fixed order, shortest round-trip numbers.
/// parse_config(write_config(c)) reproduces c and the same canonical text.
std::string write_config(const RunConfig& config);

/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// All keys known to the parser, in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace filmctl
