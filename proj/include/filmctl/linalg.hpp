#pragma once

#include <Eigen/Dense>

namespace filmctl::linalg {

/// All eigenvalues of a real square matrix (LAPACK dgeev).
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a);

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // right eigenvectors, column i for values[i]
};

/// Right eigenpairs; pass a^T to obtain left eigenvectors.
EigenDecomposition eigen_decompose(const Eigen::MatrixXd& a);

/// Real Schur form a = z t z^T with every eigenvalue of negative real part
/// ordered first (LAPACK dgees with eigenvalue selection).
struct OrderedSchur {
  Eigen::MatrixXd t;
  Eigen::MatrixXd z;
  Eigen::VectorXcd values;
  int stable_count = 0;
};
OrderedSchur stable_first_schur(const Eigen::MatrixXd& a);

/// Solution X of a^T X + X a = c (Bartels-Stewart on the real Schur form).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

/// Maximum real part over the spectrum.
double spectral_abscissa(const Eigen::VectorXcd& values);
double spectral_abscissa(const Eigen::MatrixXd& a);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-10);
int numerical_rank(const Eigen::MatrixXcd& a, double rel_tol = 1e-10);

/// Pairs every value in `expected` with its nearest unused entry of `actual`
/// and returns the largest |difference| / max(1, |expected|).
double max_matched_distance(const Eigen::VectorXcd& expected, const Eigen::VectorXcd& actual);

}  // namespace filmctl::linalg
