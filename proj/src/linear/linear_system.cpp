#include "filmctl/linear_system.hpp"

#include <algorithm>
#include <numbers>

#include "filmctl/diff_ops.hpp"
#include "filmctl/errors.hpp"

namespace filmctl {

LinearSystem LinearSystem::from_matrices(Eigen::MatrixXd j, Eigen::MatrixXd psi) {
  if (j.rows() != j.cols() || psi.rows() != j.rows()) {
    throw InvalidArgument("inconsistent J / Psi dimensions");
  }
  LinearSystem sys;
  sys.grid_points = static_cast<int>(j.rows());
  sys.actuator_count = static_cast<int>(psi.cols());
  sys.observation = Eigen::MatrixXd::Identity(j.rows(), j.rows());
  sys.jacobian = std::move(j);
  sys.actuation = std::move(psi);
  return sys;
}

Eigen::MatrixXd build_jacobian(Model model, const FlowParameters& params, const Grid& grid) {
  params.validate();
  const double re = params.reynolds;
  const double ca = params.capillary;
  const double cot = params.cot_theta();
  const int n = grid.size();

  if (model == Model::Benney) {
    const DiffOps ops = build_diff_ops(grid);
    return -2.0 * ops.d1 + (2.0 * cot / 3.0 - 8.0 * re / 15.0) * ops.d2 - ops.d4 / (3.0 * ca);
  }

  const StaggeredOps ops = build_staggered_ops(grid);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -ops.divergence;
  j.bottomLeftCorner(n, n) = (5.0 / re) * ops.average +
                             (4.0 / 7.0 - 5.0 * cot / (3.0 * re)) * ops.gradient +
                             (5.0 / (6.0 * re * ca)) * ops.third;
  j.bottomRightCorner(n, n) = -(5.0 / (2.0 * re)) * Eigen::MatrixXd::Identity(n, n) -
                              (34.0 / 21.0) * ops.face_d1;
  return j;
}

LinearSystem build_linear_system(Model model, const FlowParameters& params, const Grid& grid,
                                 const ActuatorConfig& actuators) {
  LinearSystem sys;
  sys.model = model;
  sys.params = params;
  sys.grid_points = grid.size();
  sys.actuator_count = actuators.count;
  sys.actuator_width = actuators.width;
  sys.jacobian = build_jacobian(model, params, grid);
  sys.actuation = actuator_matrix(model, params, actuators, grid);
  sys.observation = Eigen::MatrixXd::Identity(sys.jacobian.rows(), sys.jacobian.rows());
  return sys;
}

std::vector<std::complex<double>> grid_mode_eigenvalues(const Eigen::MatrixXd& jacobian,
                                                        Model model, const Grid& grid, int m) {
  const int n = grid.size();
  const int fields = fields_per_point(model);
  if (jacobian.rows() != fields * n) throw InvalidArgument("Jacobian size does not match model");

  // Symbol of block (a, b): sum_l J_ab(0, l) exp(i k l dx) for the circulant block.
  const double k = grid.wavenumber(m);
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < fields; ++a) {
    for (int b = 0; b < fields; ++b) {
      std::complex<double> s = 0.0;
      for (int l = 0; l < n; ++l) {
        const double w = jacobian(a * n, b * n + l);
        if (w != 0.0) s += w * std::polar(1.0, k * l * grid.spacing());
      }
      block(a, b) = s;
    }
  }

  std::vector<std::complex<double>> values;
  if (fields == 1) {
    values.push_back(block(0, 0));
  } else {
    const std::complex<double> tr = block(0, 0) + block(1, 1);
    const std::complex<double> det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
    values.push_back(0.5 * (tr + disc));
    values.push_back(0.5 * (tr - disc));
  }
  std::sort(values.begin(), values.end(),
            [](auto a, auto b) { return a.real() > b.real(); });
  return values;
}

}  // namespace filmctl
