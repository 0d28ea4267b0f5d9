#pragma once

#include <vector>

#include <Eigen/Dense>

#include "filmctl/grid.hpp"
#include "filmctl/interface_state.hpp"
#include "filmctl/parameters.hpp"

namespace filmctl {

inline constexpr double kDefaultActuatorWidth = 0.1;
inline constexpr int kDefaultActuatorCount = 5;

/// Evenly spaced basal blowing/suction slots with the periodic bump profile
///   d(x) = A exp[(cos(2 pi x / L) - 1) / w^2].
/// A is fixed so that the trapezoid sum of d over the simulation grid is 1,
/// which keeps the discrete mass injected by a unit amplitude exactly one.
struct ActuatorConfig {
  int count = 0;
  double width = kDefaultActuatorWidth;
  double aspect = kDefaultAspect;
  int grid_points = 0;
  std::vector<double> positions;  // x_i = (i - 1/2) L / M
  double amplitude_norm = 0.0;

  /// Actuator centre in grid units, positions[i] / dx.
  [[nodiscard]] double cell_offset(int i) const;
};

/// Builds M actuators for `grid`; throws InvalidArgument for M < 1 or w <= 0.
ActuatorConfig make_actuators(int count, double width, const Grid& grid);

/// Unnormalised bump integral over one period by the trapezoid rule on n points.
double bump_integral(double width, double aspect, int n);

/// Value of the bump centred at the origin.
double bump(double x, const ActuatorConfig& config);

/// N x M matrix of samples d(x_j - x_i). Entries for actuators whose spacing is
/// a whole number of cells are exact cyclic shifts of one another.
Eigen::MatrixXd bump_matrix(const ActuatorConfig& config, const Grid& grid);

/// f_j = sum_i u_i d(x_j - x_i).
Eigen::VectorXd assemble_forcing(const Eigen::VectorXd& u, const ActuatorConfig& config,
                                 const Grid& grid);

/// Linearised actuation Psi.
///   Benney:            column i = d_i + (2 Re / 3) D1 d_i               (N x M)
///   weighted-residual: column i = [d_i ; (1/3) avg(d_i)] with the lower
///                      block at the cell faces                           (2N x M)
Eigen::MatrixXd actuator_matrix(Model model, const FlowParameters& params,
                                const ActuatorConfig& config, const Grid& grid);

}  // namespace filmctl
