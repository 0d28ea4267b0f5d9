#pragma once

#include <Eigen/Dense>

#include "filmctl/grid.hpp"
#include "filmctl/linear_system.hpp"
#include "filmctl/lqr.hpp"

namespace filmctl {

/// Orthonormal basis of the unstable left-invariant subspace of a circulant
/// (or block-circulant) Jacobian, assembled Fourier mode by Fourier mode.
struct UnstableSubspace {
  Eigen::MatrixXd basis;    // state_dim x n_u, orthonormal columns W
  Eigen::MatrixXd dynamics; // W^T J W
  int unstable_modes = 0;
};

/// Collects every eigenvalue with Re >= -1e-10 (the neutral mass mode
/// included). Throws InvalidArgument if J is not block-circulant on `grid`.
UnstableSubspace unstable_fourier_subspace(const LinearSystem& system, const Grid& grid);

/// LQR on the n_u-dimensional unstable block only, lifted back as
/// K = K_u W^T so the stable Fourier modes receive no feedback and their
/// eigenvalues survive unchanged in J + Psi K. Throws InsufficientActuators
/// when W^T Psi has row rank below n_u.
GainMatrix fourier_restricted_gain(const LinearSystem& system, const CostWeights& weights,
                                   const Grid& grid);

}  // namespace filmctl
