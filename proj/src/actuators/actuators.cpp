#include "filmctl/actuators.hpp"

#include <cmath>
#include <numbers>

#include "filmctl/diff_ops.hpp"
#include "filmctl/errors.hpp"

namespace filmctl {

namespace {

// Bump profile in grid units: `offset` is (x - x_i) / dx. The offset is reduced
// into [-n/2, n/2) first so shifted actuators see bit-identical arguments.
double unit_bump(double offset, double width, int n) {
  double r = std::fmod(offset, static_cast<double>(n));
  if (r < -0.5 * n) r += n;
  if (r >= 0.5 * n) r -= n;
  const double phase = 2.0 * std::numbers::pi * r / n;
  return std::exp((std::cos(phase) - 1.0) / (width * width));
}

}  // namespace

double ActuatorConfig::cell_offset(int i) const {
  // (2i + 1) N / (2M) for zero-based i; exact whenever M divides N.
  return static_cast<double>((2 * i + 1) * grid_points) / (2.0 * count);
}

double bump_integral(double width, double aspect, int n) {
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += unit_bump(j, width, n);
  return sum * aspect / n;
}

ActuatorConfig make_actuators(int count, double width, const Grid& grid) {
  if (count < 1) throw InvalidArgument("actuator count must be >= 1");
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidArgument("actuator width must be > 0");
  ActuatorConfig config;
  config.count = count;
  config.width = width;
  config.aspect = grid.aspect();
  config.grid_points = grid.size();
  config.amplitude_norm = 1.0 / bump_integral(width, grid.aspect(), grid.size());
  config.positions.resize(count);
  for (int i = 0; i < count; ++i) config.positions[i] = config.cell_offset(i) * grid.spacing();
  return config;
}

double bump(double x, const ActuatorConfig& config) {
  const double phase = 2.0 * std::numbers::pi * x / config.aspect;
  return config.amplitude_norm *
         std::exp((std::cos(phase) - 1.0) / (config.width * config.width));
}

Eigen::MatrixXd bump_matrix(const ActuatorConfig& config, const Grid& grid) {
  if (config.grid_points != grid.size()) throw InvalidArgument("actuators built for another grid");
  Eigen::MatrixXd d(grid.size(), config.count);
  for (int i = 0; i < config.count; ++i) {
    const double centre = config.cell_offset(i);
    for (int j = 0; j < grid.size(); ++j) {
      d(j, i) = config.amplitude_norm * unit_bump(j - centre, config.width, grid.size());
    }
  }
  return d;
}

Eigen::VectorXd assemble_forcing(const Eigen::VectorXd& u, const ActuatorConfig& config,
                                 const Grid& grid) {
  if (u.size() != config.count) throw InvalidArgument("control vector length != actuator count");
  return bump_matrix(config, grid) * u;
}

Eigen::MatrixXd actuator_matrix(Model model, const FlowParameters& params,
                                const ActuatorConfig& config, const Grid& grid) {
  const Eigen::MatrixXd d = bump_matrix(config, grid);
  const int n = grid.size();
  if (model == Model::Benney) {
    const DiffOps ops = build_diff_ops(grid);
    return d + (2.0 * params.reynolds / 3.0) * (ops.d1 * d);
  }
  const StaggeredOps faces = build_staggered_ops(grid);
  Eigen::MatrixXd psi(2 * n, config.count);
  psi.topRows(n) = d;
  psi.bottomRows(n) = (faces.average * d) / 3.0;
  return psi;
}

}  // namespace filmctl
