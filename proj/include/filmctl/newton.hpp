#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace filmctl {

struct NewtonOptions {
  double tol = 1e-10;    // max-norm residual target
  int max_iter = 20;
  int min_iter = 1;      // always apply at least this many updates
  /// Also accept once the max-norm update falls below this after min_iter
  /// updates: the iterate has reached the roundoff floor of the residual.
  double step_tol = 1e-13;
};

enum class NewtonStatus { Converged, Diverged, MaxIterations, SingularJacobian };

struct NewtonResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  NewtonStatus status = NewtonStatus::MaxIterations;

  [[nodiscard]] bool converged() const noexcept { return status == NewtonStatus::Converged; }
};

/// Plain Newton iteration x <- x - J(x)^{-1} F(x) with a sparse direct solve.
/// `residual(x)` returns F(x); `jacobian(x)` returns the exact sparse dF/dx.
/// Stops once ||F||_inf <= tol (after min_iter updates) or once the update has
/// stagnated at roundoff with ||F||_inf within 1e3 tol; declares divergence
/// after three consecutive residual increases or any non-finite residual.
template <class Residual, class Jacobian>
NewtonResult newton_solve(Residual&& residual, Jacobian&& jacobian, Eigen::VectorXd guess,
                          const NewtonOptions& opts = {}) {
  NewtonResult out;
  out.x = std::move(guess);
  Eigen::VectorXd f = residual(out.x);
  out.residual = f.template lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analysed = false;
  int growth = 0;

  for (int it = 0;; ++it) {
    if (!std::isfinite(out.residual)) {
      out.status = NewtonStatus::Diverged;
      return out;
    }
    if (it >= opts.min_iter && out.residual <= opts.tol) {
      out.status = NewtonStatus::Converged;
      return out;
    }
    if (it >= opts.max_iter) {
      out.status = NewtonStatus::MaxIterations;
      return out;
    }

    const Eigen::SparseMatrix<double> jac = jacobian(out.x);
    if (!analysed) {
      lu.analyzePattern(jac);
      analysed = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) {
      out.status = NewtonStatus::SingularJacobian;
      return out;
    }
    const Eigen::VectorXd update = lu.solve(f);
    out.x -= update;
    ++out.iterations;

    const double previous = out.residual;
    f = residual(out.x);
    out.residual = f.template lpNorm<Eigen::Infinity>();
    if (out.iterations >= opts.min_iter && std::isfinite(out.residual) &&
        update.template lpNorm<Eigen::Infinity>() <= opts.step_tol * (1.0 + out.x.template lpNorm<Eigen::Infinity>()) &&
        out.residual <= 1e3 * opts.tol) {
      out.status = NewtonStatus::Converged;
      return out;
    }
    growth = out.residual > previous ? growth + 1 : 0;
    if (growth >= 3) {
      out.status = NewtonStatus::Diverged;
      return out;
    }
  }
}

}  // namespace filmctl
