#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "filmctl/grid.hpp"
#include "filmctl/linear_system.hpp"

namespace filmctl {

inline constexpr double kDefaultBeta = 0.5;

/// Discrete analogue of the quadratic cost beta int h^2 + (1 - beta) int f^2:
/// U = (beta L / N) I on the state, V = (1 - beta) I on the controls.
struct CostWeights {
  double beta = kDefaultBeta;
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
};

/// `fields` is 1 for Benney and 2 for the weighted-residual state. Throws
/// InvalidArgument when beta is outside (0, 1).
CostWeights cost_weights(double beta, const Grid& grid, int actuators, int fields = 1);

enum class CareMethod { Schur, Eigenvector };
[[nodiscard]] const char* to_string(CareMethod method) noexcept;

struct CareSolution {
  Eigen::MatrixXd p;
  CareMethod method = CareMethod::Schur;
  double residual = 0.0;  // Frobenius norm of the Riccati residual
};

/// ||J^T P + P J + U - P Psi V^{-1} Psi^T P||_F
double care_residual(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi, const Eigen::MatrixXd& u,
                     const Eigen::MatrixXd& v, const Eigen::MatrixXd& p);

/// Stabilising solution of J^T P + P J + U - P Psi V^{-1} Psi^T P = 0 from the
/// stable invariant subspace of the Hamiltonian [[J, -Psi V^-1 Psi^T], [-U, -J^T]].
///
/// With no method given the ordered real Schur route runs first and the
/// eigenvector route is the fallback when its basis is near-singular.
/// Throws NonStabilisable when the Hamiltonian has (numerically) imaginary-axis
/// eigenvalues, IllConditioned when the chosen basis cannot be inverted.
CareSolution solve_care(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi,
                        const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                        std::optional<CareMethod> method = std::nullopt);
CareSolution solve_care(const LinearSystem& system, const CostWeights& weights,
                        std::optional<CareMethod> method = std::nullopt);

struct GainMetadata {
  Model model = Model::Benney;
  FlowParameters params;
  double beta = kDefaultBeta;
  int actuators = 0;
  double width = 0.0;
  int grid_points = 0;
  std::string solver = "schur";
  bool reduced = false;  // weighted-residual gain folded onto h only

  friend bool operator==(const GainMetadata&, const GainMetadata&) = default;
};

/// Feedback u = K * observed deviation.
struct GainMatrix {
  Eigen::MatrixXd k;
  GainMetadata meta;

  [[nodiscard]] int rows() const noexcept { return static_cast<int>(k.rows()); }
  [[nodiscard]] int cols() const noexcept { return static_cast<int>(k.cols()); }
};

/// K = -V^{-1} Psi^T P.
GainMatrix gain(const Eigen::MatrixXd& p, const LinearSystem& system, const CostWeights& weights,
                const std::string& solver = "schur");

/// Solve the CARE for `system` and return the gain (with the P used).
struct GainSynthesis {
  GainMatrix gain;
  CareSolution care;
};
GainSynthesis synthesize_gain(const LinearSystem& system, const CostWeights& weights,
                              std::optional<CareMethod> method = std::nullopt);

/// Eliminates the flux columns of a weighted-residual gain with the leading
/// order relation q_hat = 2 h_hat, evaluated at the faces: K_eff = K_h + 2 K_q avg.
GainMatrix reduce_wr_gain(const GainMatrix& full);

struct ClosedLoop {
  Eigen::MatrixXd a;
  Eigen::VectorXcd eigenvalues;
  double spectral_abscissa = 0.0;
};

/// A = J + Psi K Phi. A gain with N columns paired with a 2N-state
/// weighted-residual system observes the heights only (Phi = [I 0]).
ClosedLoop closed_loop(const LinearSystem& system, const GainMatrix& gain);
ClosedLoop closed_loop(const LinearSystem& system, const Eigen::MatrixXd& k);

}  // namespace filmctl
