#include "filmctl/lqr.hpp"

#include <cmath>

#include "filmctl/controllability.hpp"
#include "filmctl/errors.hpp"
#include "filmctl/linalg.hpp"

namespace filmctl {

namespace {

// A basis whose reciprocal condition estimate falls below this cannot be
// trusted to produce P to the residual target.
constexpr double kMinBasisRcond = 1e-13;

Eigen::MatrixXd hamiltonian(const Eigen::MatrixXd& j, const Eigen::MatrixXd& g,
                            const Eigen::MatrixXd& u) {
  const Eigen::Index n = j.rows();
  Eigen::MatrixXd h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = j;
  h.topRightCorner(n, n) = -g;
  h.bottomLeftCorner(n, n) = -u;
  h.bottomRightCorner(n, n) = -j.transpose();
  return h;
}

void check_dimensions(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi, const Eigen::MatrixXd& u,
                      const Eigen::MatrixXd& v) {
  const Eigen::Index n = j.rows();
  if (j.cols() != n || psi.rows() != n || u.rows() != n || u.cols() != n ||
      v.rows() != psi.cols() || v.cols() != psi.cols()) {
    throw InvalidArgument("CARE operands have inconsistent dimensions");
  }
}

// Stable eigenvalues must number exactly n and stay off the imaginary axis.
void check_dichotomy(const Eigen::VectorXcd& values, Eigen::Index n, double scale) {
  Eigen::Index stable = 0;
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& v : values) {
    stable += v.real() < 0.0 ? 1 : 0;
    closest = std::min(closest, std::abs(v.real()));
  }
  if (stable != n || closest <= 1e-13 * scale) {
    throw NonStabilisable("Hamiltonian has eigenvalues on the imaginary axis");
  }
}

Eigen::MatrixXd solve_schur(const Eigen::MatrixXd& h, Eigen::Index n) {
  const linalg::OrderedSchur schur = linalg::stable_first_schur(h);
  check_dichotomy(schur.values, n, h.lpNorm<Eigen::Infinity>());
  if (schur.stable_count != n) throw NonStabilisable("stable subspace has the wrong dimension");

  const Eigen::MatrixXd z11 = schur.z.topLeftCorner(n, n);
  const Eigen::MatrixXd z21 = schur.z.bottomLeftCorner(n, n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(z11.transpose());
  if (!(lu.rcond() > kMinBasisRcond)) throw IllConditioned("Schur basis block is near-singular");
  // P = Z21 Z11^{-1}
  return lu.solve(z21.transpose()).transpose();
}

Eigen::MatrixXd solve_eigenvector(const Eigen::MatrixXd& h, Eigen::Index n) {
  const linalg::EigenDecomposition eig = linalg::eigen_decompose(h);
  check_dichotomy(eig.values, n, h.lpNorm<Eigen::Infinity>());

  Eigen::MatrixXcd basis(2 * n, n);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i].real() < 0.0) basis.col(col++) = eig.vectors.col(i);
  }
  const Eigen::MatrixXcd x1 = basis.topRows(n);
  const Eigen::MatrixXcd x2 = basis.bottomRows(n);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(x1.transpose());
  if (!(lu.rcond() > kMinBasisRcond)) throw IllConditioned("eigenvector basis block is near-singular");
  return lu.solve(x2.transpose()).transpose().real();
}

Eigen::MatrixXd riccati_residual(const Eigen::MatrixXd& j, const Eigen::MatrixXd& g,
                                 const Eigen::MatrixXd& u, const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd jp = j.transpose() * p;
  Eigen::MatrixXd r = jp + jp.transpose() + u - p * g * p;
  return 0.5 * (r + r.transpose());
}

// Newton (Kleinman) correction of a subspace solution: with A_c = J - G P
// solve A_c^T X + X A_c = -R(P) and set P <- P + X. The subspace methods are
// accurate relative to ||H||, which for stiff J leaves an absolute residual
// far above roundoff; a couple of corrections bring it to the floor set by
// evaluating R itself.
Eigen::MatrixXd refine(const Eigen::MatrixXd& j, const Eigen::MatrixXd& g, const Eigen::MatrixXd& u,
                       Eigen::MatrixXd p) {
  Eigen::MatrixXd r = riccati_residual(j, g, u, p);
  double best = r.norm();
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    Eigen::MatrixXd x;
    try {
      x = linalg::solve_lyapunov(j - g * p, -r);
    } catch (const Error&) {
      break;
    }
    Eigen::MatrixXd next = p + 0.5 * (x + x.transpose());
    const Eigen::MatrixXd rn = riccati_residual(j, g, u, next);
    const double norm = rn.norm();
    if (!(norm < best)) break;
    const bool stalled = norm > 0.5 * best;
    p = std::move(next);
    r = rn;
    best = norm;
    if (stalled) break;
  }
  return p;
}

}  // namespace

const char* to_string(CareMethod method) noexcept {
  return method == CareMethod::Schur ? "schur" : "eigenvector";
}

double care_residual(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi, const Eigen::MatrixXd& u,
                     const Eigen::MatrixXd& v, const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd pb = p * psi;
  const Eigen::MatrixXd r =
      j.transpose() * p + p * j + u - pb * v.ldlt().solve(pb.transpose());
  return r.norm();
}

CareSolution solve_care(const Eigen::MatrixXd& j, const Eigen::MatrixXd& psi,
                        const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                        std::optional<CareMethod> method) {
  check_dimensions(j, psi, u, v);
  const Eigen::Index n = j.rows();
  // The gain is invariant under (U, V) -> (cU, cV) while P scales with c.
  // Solving in units where ||V|| is O(1) (a power of two, so the unscaling
  // is exact) keeps every scaled problem on the same floating-point path.
  int exponent = 0;
  std::frexp(v.norm(), &exponent);
  const double scale = std::ldexp(1.0, -exponent);
  const Eigen::MatrixXd us = scale * u;
  const Eigen::MatrixXd g = psi * (scale * v).ldlt().solve(psi.transpose());
  const Eigen::MatrixXd h = hamiltonian(j, g, us);

  CareSolution sol;
  if (method) {
    sol.method = *method;
    sol.p = *method == CareMethod::Schur ? solve_schur(h, n) : solve_eigenvector(h, n);
  } else {
    try {
      sol.p = solve_schur(h, n);
      sol.method = CareMethod::Schur;
    } catch (const IllConditioned&) {
      try {
        sol.p = solve_eigenvector(h, n);
        sol.method = CareMethod::Eigenvector;
      } catch (const IllConditioned&) {
        // Both bases are singular: an unreachable unstable mode is the usual
        // cause, which the Hautus test identifies.
        if (!stabilisable(j, psi).stabilisable)
          throw NonStabilisable("an unstable mode is not reachable by the actuation");
        throw;
      }
    }
  }
  sol.p = (0.5 * (sol.p + sol.p.transpose())).eval();
  sol.p = refine(j, g, us, std::move(sol.p)) / scale;
  sol.residual = care_residual(j, psi, u, v, sol.p);
  return sol;
}

CareSolution solve_care(const LinearSystem& system, const CostWeights& weights,
                        std::optional<CareMethod> method) {
  return solve_care(system.jacobian, system.actuation, weights.u, weights.v, method);
}

}  // namespace filmctl
