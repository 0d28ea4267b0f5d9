#pragma once

#include <Eigen/Dense>

#include "filmctl/linear_system.hpp"

namespace filmctl {

struct RankReport {
  bool controllable = false;
  int rank = 0;
  int dimension = 0;
};

/// Kalman test: rank [Psi, J Psi, ..., J^{n-1} Psi] == n, with numerical rank
/// cut at 1e-10 sigma_max. Each block is rescaled to unit norm before the SVD
/// (rank-preserving) so high powers of J do not overflow. Only meaningful for
/// small n; the power sequence is badly conditioned otherwise.
RankReport kalman_controllable(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi);
RankReport kalman_controllable(const LinearSystem& system);

struct StabilisabilityReport {
  bool stabilisable = false;
  bool defective_warning = false;  // an unstable eigenvalue lacks a full eigenspace
  int unstable_eigenvalues = 0;    // counted with multiplicity, Re >= -1e-10
};

/// Hautus test restricted to the eigenvalues with Re(lambda) >= -1e-10:
/// rank [lambda I - J, Psi] must be n for each of them, i.e. no left
/// eigenvector of an unstable eigenvalue is orthogonal to range(Psi).
StabilisabilityReport stabilisable(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi);
StabilisabilityReport stabilisable(const LinearSystem& system);

}  // namespace filmctl
