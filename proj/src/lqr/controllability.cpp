#include "filmctl/controllability.hpp"

#include <cmath>
#include <vector>

#include "filmctl/errors.hpp"
#include "filmctl/linalg.hpp"

namespace filmctl {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kUnstableTol = 1e-10;

}  // namespace

RankReport kalman_controllable(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi) {
  const Eigen::Index n = j.rows();
  const Eigen::Index m = psi.cols();
  if (j.cols() != n || psi.rows() != n) throw InvalidArgument("J / Psi dimensions disagree");

  Eigen::MatrixXd c(n, n * m);
  Eigen::MatrixXd block = psi;
  for (Eigen::Index p = 0; p < n; ++p) {
    const double scale = block.norm();
    if (scale > 0.0) block /= scale;
    c.middleCols(p * m, m) = block;
    block = j * block;
  }
  RankReport report;
  report.dimension = static_cast<int>(n);
  report.rank = linalg::numerical_rank(c, kRankTol);
  report.controllable = report.rank == report.dimension;
  return report;
}

RankReport kalman_controllable(const LinearSystem& system) {
  return kalman_controllable(system.jacobian, system.actuation);
}

StabilisabilityReport stabilisable(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi) {
  const Eigen::Index n = j.rows();
  if (j.cols() != n || psi.rows() != n) throw InvalidArgument("J / Psi dimensions disagree");

  const Eigen::VectorXcd values = linalg::eigenvalues(j);
  StabilisabilityReport report;
  report.stabilisable = true;

  // Cluster the unstable eigenvalues; each cluster is tested once.
  const double scale = std::max(1.0, j.lpNorm<Eigen::Infinity>());
  std::vector<std::complex<double>> centres;
  std::vector<int> multiplicity;
  for (const auto& v : values) {
    if (v.real() < -kUnstableTol) continue;
    ++report.unstable_eigenvalues;
    bool merged = false;
    for (std::size_t c = 0; c < centres.size(); ++c) {
      if (std::abs(centres[c] - v) <= 1e-8 * scale) {
        ++multiplicity[c];
        merged = true;
        break;
      }
    }
    if (!merged) {
      centres.push_back(v);
      multiplicity.push_back(1);
    }
  }

  const Eigen::MatrixXcd jc = j.cast<std::complex<double>>();
  const Eigen::MatrixXcd psic = psi.cast<std::complex<double>>();
  for (std::size_t c = 0; c < centres.size(); ++c) {
    // A conjugate partner carries the same information.
    if (centres[c].imag() < 0.0) continue;
    Eigen::MatrixXcd shifted = -jc;
    shifted.diagonal().array() += centres[c];
    Eigen::MatrixXcd pbh(n, n + psi.cols());
    pbh << shifted, psic;
    if (linalg::numerical_rank(pbh, kRankTol) < n) report.stabilisable = false;
    if (multiplicity[c] > 1) {
      const int geometric = static_cast<int>(n) - linalg::numerical_rank(shifted, kRankTol);
      if (geometric < multiplicity[c]) report.defective_warning = true;
    }
  }
  return report;
}

StabilisabilityReport stabilisable(const LinearSystem& system) {
  return stabilisable(system.jacobian, system.actuation);
}

}  // namespace filmctl
