#include "filmctl/fourier_gain.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "filmctl/errors.hpp"
#include "filmctl/linalg.hpp"

namespace filmctl {

namespace {

constexpr double kUnstableTol = 1e-10;

// Real orthonormal Fourier vectors of mode m for one field on n points.
std::vector<Eigen::VectorXd> fourier_vectors(int m, int n) {
  std::vector<Eigen::VectorXd> out;
  if (m == 0) {
    out.push_back(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(n)));
    return out;
  }
  if (2 * m == n) {
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v[j] = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(n);
    out.push_back(v);
    return out;
  }
  Eigen::VectorXd c(n), s(n);
  const double scale = std::sqrt(2.0 / n);
  for (int j = 0; j < n; ++j) {
    const double phase = 2.0 * std::numbers::pi * m * j / n;
    c[j] = scale * std::cos(phase);
    s[j] = scale * std::sin(phase);
  }
  out.push_back(c);
  out.push_back(s);
  return out;
}

}  // namespace

UnstableSubspace unstable_fourier_subspace(const LinearSystem& system, const Grid& grid) {
  const int n = grid.size();
  const int dim = system.state_dim();
  if (dim % n != 0) throw InvalidArgument("state dimension is not a multiple of the grid size");
  const int fields = dim / n;
  const Eigen::MatrixXd& j = system.jacobian;
  const double scale = std::max(1.0, j.lpNorm<Eigen::Infinity>());

  std::vector<Eigen::VectorXd> columns;
  for (int m = 0; m <= n / 2; ++m) {
    const auto per_field = fourier_vectors(m, n);
    const int width = static_cast<int>(per_field.size()) * fields;
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, width);
    int col = 0;
    for (int f = 0; f < fields; ++f) {
      for (const auto& v : per_field) e.col(col++).segment(f * n, n) = v;
    }
    const Eigen::MatrixXd je = j * e;
    const Eigen::MatrixXd block = e.transpose() * je;
    const Eigen::MatrixXd jte = j.transpose() * e;
    if ((je - e * block).norm() > 1e-9 * scale ||
        (jte - e * block.transpose()).norm() > 1e-9 * scale) {
      throw InvalidArgument("Jacobian is not block-circulant on this grid");
    }

    // Left eigenvectors of the block = right eigenvectors of its transpose.
    const linalg::EigenDecomposition eig = linalg::eigen_decompose(block.transpose());
    std::vector<Eigen::VectorXd> local;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      const auto lambda = eig.values[i];
      if (lambda.real() < -kUnstableTol) continue;
      if (lambda.imag() < 0.0) continue;  // partner supplies the real/imag pair
      local.push_back(eig.vectors.col(i).real());
      if (lambda.imag() > 0.0) local.push_back(eig.vectors.col(i).imag());
    }
    if (local.empty()) continue;

    Eigen::MatrixXd w(width, static_cast<Eigen::Index>(local.size()));
    for (std::size_t c = 0; c < local.size(); ++c) w.col(static_cast<Eigen::Index>(c)) = local[c];
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(width, static_cast<Eigen::Index>(local.size()));
    const Eigen::MatrixXd lifted = e * q;
    for (Eigen::Index c = 0; c < lifted.cols(); ++c) columns.push_back(lifted.col(c));
  }

  UnstableSubspace out;
  out.unstable_modes = static_cast<int>(columns.size());
  out.basis.resize(dim, out.unstable_modes);
  for (int c = 0; c < out.unstable_modes; ++c) out.basis.col(c) = columns[c];
  out.dynamics = out.basis.transpose() * j * out.basis;
  return out;
}

GainMatrix fourier_restricted_gain(const LinearSystem& system, const CostWeights& weights,
                                   const Grid& grid) {
  const UnstableSubspace sub = unstable_fourier_subspace(system, grid);
  const int m = static_cast<int>(system.actuation.cols());

  GainMatrix g;
  g.meta.model = system.model;
  g.meta.params = system.params;
  g.meta.beta = weights.beta;
  g.meta.actuators = m;
  g.meta.width = system.actuator_width;
  g.meta.grid_points = system.grid_points;
  g.meta.solver = "fourier-schur";
  if (sub.unstable_modes == 0) {
    g.k = Eigen::MatrixXd::Zero(m, system.state_dim());
    return g;
  }

  const Eigen::MatrixXd psi_u = sub.basis.transpose() * system.actuation;
  if (linalg::numerical_rank(psi_u, 1e-10) < sub.unstable_modes) {
    throw InsufficientActuators("projected actuation has row rank below the " +
                                std::to_string(sub.unstable_modes) + " unstable modes");
  }
  // The basis is orthonormal, so U restricts to the same multiple of identity.
  const double state_weight = weights.u(0, 0);
  const Eigen::MatrixXd u_u =
      Eigen::MatrixXd::Identity(sub.unstable_modes, sub.unstable_modes) * state_weight;
  const CareSolution care = solve_care(sub.dynamics, psi_u, u_u, weights.v, CareMethod::Schur);
  const Eigen::MatrixXd k_u = -weights.v.ldlt().solve(psi_u.transpose() * care.p);
  g.k = k_u * sub.basis.transpose();
  return g;
}

}  // namespace filmctl
