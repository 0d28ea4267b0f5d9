#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "filmctl/actuators.hpp"
#include "filmctl/grid.hpp"
#include "filmctl/interface_state.hpp"
#include "filmctl/parameters.hpp"

namespace filmctl {

/// Linearisation about the Nusselt film, d(state)/dt = J state + Psi u, with
/// full observation (Phi = I). For the weighted-residual model the state is
/// [h_hat (nodes); q_hat (faces)].
struct LinearSystem {
  Model model = Model::Benney;
  FlowParameters params;
  int grid_points = 0;
  int actuator_count = 0;
  double actuator_width = kDefaultActuatorWidth;
  Eigen::MatrixXd jacobian;
  Eigen::MatrixXd actuation;
  Eigen::MatrixXd observation;

  [[nodiscard]] int state_dim() const noexcept { return static_cast<int>(jacobian.rows()); }

  /// Wraps raw matrices (small test systems); metadata stays default.
  static LinearSystem from_matrices(Eigen::MatrixXd j, Eigen::MatrixXd psi);
};

/// Benney:  J = -2 D1 + (2 cot/3 - 8 Re/15) D2 - D4 / (3 Ca).
/// WR:      [[0, -div], [(5/Re) avg + (4/7 - 5 cot/(3 Re)) grad + (5/(6 Re Ca)) third,
///                        -(5/(2 Re)) I - (34/21) D1_faces]].
Eigen::MatrixXd build_jacobian(Model model, const FlowParameters& params, const Grid& grid);

LinearSystem build_linear_system(Model model, const FlowParameters& params, const Grid& grid,
                                 const ActuatorConfig& actuators);

/// Eigenvalues of J restricted to grid Fourier mode m (one per field), from
/// the discrete symbol of the circulant blocks. Sorted by decreasing real part.
std::vector<std::complex<double>> grid_mode_eigenvalues(const Eigen::MatrixXd& jacobian,
                                                        Model model, const Grid& grid, int m);

}  // namespace filmctl
