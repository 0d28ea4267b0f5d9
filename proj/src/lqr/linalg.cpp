#include "filmctl/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "filmctl/errors.hpp"

namespace filmctl::linalg {

namespace {

void require_square(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("matrix must be square");
}

lapack_logical negative_real_part(const double* re, const double* /*im*/) { return *re < 0.0; }

}  // namespace

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a) {
  require_square(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (n == 0) return {};
  Eigen::MatrixXd work = a;
  std::vector<double> wr(n), wi(n);
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(),
                                        wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalFailure("dgeev failed to converge");
  Eigen::VectorXcd values(n);
  for (lapack_int i = 0; i < n; ++i) values[i] = {wr[i], wi[i]};
  return values;
}

EigenDecomposition eigen_decompose(const Eigen::MatrixXd& a) {
  require_square(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  Eigen::MatrixXd vr(n, n);
  std::vector<double> wr(n), wi(n);
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, wr.data(),
                                        wi.data(), nullptr, 1, vr.data(), n);
  if (info != 0) throw NumericalFailure("dgeev failed to converge");

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (lapack_int i = 0; i < n; ++i) {
    out.values[i] = {wr[i], wi[i]};
    if (wi[i] == 0.0) {
      out.vectors.col(i) = vr.col(i).cast<std::complex<double>>();
    } else if (wi[i] > 0.0 && i + 1 < n) {
      // Conjugate pair stored as (real, imaginary) columns.
      const Eigen::VectorXcd v = vr.col(i).cast<std::complex<double>>() +
                                 std::complex<double>(0.0, 1.0) * vr.col(i + 1);
      out.vectors.col(i) = v;
      out.values[i + 1] = {wr[i + 1], wi[i + 1]};
      out.vectors.col(i + 1) = v.conjugate();
      ++i;
    }
  }
  return out;
}

OrderedSchur stable_first_schur(const Eigen::MatrixXd& a) {
  require_square(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  OrderedSchur out;
  out.t = a;
  out.z.resize(n, n);
  std::vector<double> wr(n), wi(n);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', negative_real_part, n, out.t.data(), n, &sdim,
                    wr.data(), wi.data(), out.z.data(), n);
  if (info != 0 && info != n + 2) throw NumericalFailure("dgees failed");
  // info == n + 2 means rounding after reordering moved an eigenvalue across
  // the selection boundary; the caller's stable-count check catches it.
  out.stable_count = static_cast<int>(sdim);
  out.values.resize(n);
  for (lapack_int i = 0; i < n; ++i) out.values[i] = {wr[i], wi[i]};
  return out;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  require_square(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (c.rows() != n || c.cols() != n) throw InvalidArgument("Lyapunov operands have inconsistent sizes");
  // a = z t z^T, then t^T y + y t = z^T c z with x = z y z^T (Bartels-Stewart).
  Eigen::MatrixXd t = a;
  Eigen::MatrixXd z(n, n);
  std::vector<double> wr(n), wi(n);
  lapack_int sdim = 0;
  lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, t.data(), n, &sdim,
                                  wr.data(), wi.data(), z.data(), n);
  if (info != 0) throw NumericalFailure("dgees failed in the Lyapunov solve");
  Eigen::MatrixXd y = z.transpose() * c * z;
  double scale = 1.0;
  info = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'T', 'N', 1, n, n, t.data(), n, t.data(), n, y.data(), n,
                        &scale);
  if (info < 0) throw NumericalFailure("dtrsyl failed");
  if (info == 1) throw IllConditioned("Lyapunov operator is (nearly) singular");
  return z * (y / scale) * z.transpose();
}

double spectral_abscissa(const Eigen::VectorXcd& values) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::max(best, v.real());
  return best;
}

double spectral_abscissa(const Eigen::MatrixXd& a) { return spectral_abscissa(eigenvalues(a)); }

namespace {

template <class Matrix>
int rank_of(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cut = rel_tol * s[0];
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += (s[i] > cut) ? 1 : 0;
  return r;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol) { return rank_of(a, rel_tol); }
int numerical_rank(const Eigen::MatrixXcd& a, double rel_tol) { return rank_of(a, rel_tol); }

double max_matched_distance(const Eigen::VectorXcd& expected, const Eigen::VectorXcd& actual) {
  std::vector<bool> used(actual.size(), false);
  double worst = 0.0;
  for (const auto& e : expected) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_i = -1;
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(actual[i] - e);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    if (best_i < 0) return std::numeric_limits<double>::infinity();
    used[best_i] = true;
    worst = std::max(worst, best / std::max(1.0, std::abs(e)));
  }
  return worst;
}

}  // namespace filmctl::linalg
