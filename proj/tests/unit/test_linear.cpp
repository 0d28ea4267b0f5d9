#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "filmctl/actuators.hpp"
#include "filmctl/diff_ops.hpp"
#include "filmctl/dispersion.hpp"
#include "filmctl/linalg.hpp"
#include "filmctl/linear_system.hpp"

using namespace filmctl;
using cd = std::complex<double>;

namespace {

Eigen::VectorXd sampled_sine(const Grid& g, int m) {
  Eigen::VectorXd v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = std::sin(g.wavenumber(m) * g.x(i));
  return v;
}

// Largest eigenvalue error over grid modes 1..m_max (per-mode, one model).
double mode_error(Model model, const FlowParameters& p, int n, int m) {
  const Grid g(n, p.aspect);
  const Eigen::MatrixXd j = build_jacobian(model, p, g);
  const auto numeric = grid_mode_eigenvalues(j, model, g, m);
  const double k = g.wavenumber(m);
  if (model == Model::Benney) return std::abs(numeric[0] - dispersion_benney(k, p));
  const auto exact = dispersion_wr(k, p);
  return std::max(std::abs(numeric[0] - exact[0]), std::abs(numeric[1] - exact[1]));
}

}  // namespace

TEST_SUITE("linear") {
  TEST_CASE("difference operators annihilate constants and have the expected symbols") {
    const Grid g(64, 30.0);
    const DiffOps ops = build_diff_ops(g);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(64);
    CHECK((ops.d1 * one).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ops.d2 * one).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ops.d3 * one).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ops.d4 * one).cwiseAbs().maxCoeff() < 1e-9);  // entries ~ 1/dx^4 ~ 2e2
    CHECK(ops.d4.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12 * ops.d4.cwiseAbs().maxCoeff());

    const Eigen::VectorXd s = sampled_sine(g, 3);
    const double dx = g.spacing();
    const double k = g.wavenumber(3);
    const double k2 = (2.0 - 2.0 * std::cos(k * dx)) / (dx * dx);
    CHECK(((ops.d2 * s) + k2 * s).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(((ops.d4 * s) - k2 * k2 * s).cwiseAbs().maxCoeff() < 1e-10);
    // Circulant structure.
    for (int r = 1; r < 64; ++r)
      for (int c = 0; c < 64; ++c) CHECK(ops.d3(r, c) == ops.d3(0, g.wrap(c - r)));
  }

  TEST_CASE("staggered operators compose to the node operators") {
    const Grid g(32, 30.0);
    const DiffOps ops = build_diff_ops(g);
    const StaggeredOps st = build_staggered_ops(g);
    CHECK((st.divergence * st.gradient - ops.d2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((st.divergence * st.third - ops.d4).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("Benney Jacobian coefficients") {
    const Grid g(64, 30.0);
    FlowParameters p;
    const DiffOps ops = build_diff_ops(g);
    const double cot = p.cot_theta();
    const Eigen::MatrixXd expected = -2.0 * ops.d1 + (2.0 * cot / 3.0 - 8.0 * p.reynolds / 15.0) * ops.d2 -
                                     ops.d4 / (3.0 * p.capillary);
    const Eigen::MatrixXd j = build_jacobian(Model::Benney, p, g);
    CHECK((j - expected).cwiseAbs().maxCoeff() < 1e-9);

    // At Re = (5/4) cot(theta) the second-derivative coefficient vanishes.
    p.reynolds = critical_reynolds(p.theta);
    CHECK(2.0 * cot / 3.0 - 8.0 * p.reynolds / 15.0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const Eigen::MatrixXd jc = build_jacobian(Model::Benney, p, g);
    CHECK((jc - (-2.0 * ops.d1 - ops.d4 / (3.0 * p.capillary))).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("weighted-residual Jacobian on the constant mode") {
    const Grid g(64, 30.0);
    const FlowParameters p;
    const Eigen::MatrixXd j = build_jacobian(Model::WeightedResidual, p, g);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(128);
    x.head(64).setOnes();
    const Eigen::VectorXd y = j * x;
    CHECK(y.head(64).cwiseAbs().maxCoeff() == 0.0);
    CHECK((y.tail(64).array() - 5.0 / p.reynolds).abs().maxCoeff() < 1e-10);
  }

  TEST_CASE("dispersion relations") {
    FlowParameters p;
    CHECK(dispersion_benney(0.0, p) == cd(0.0, 0.0));
    const cd l = dispersion_benney(0.3, p);
    CHECK(l.real() == doctest::Approx(0.15135898384862242).epsilon(1e-13));
    CHECK(l.imag() == doctest::Approx(-0.6).epsilon(1e-15));

    const auto r0 = dispersion_wr(0.0, p);
    CHECK(std::abs(r0[0]) < 1e-15);
    CHECK(std::abs(r0[1] - cd(-0.5, 0.0)) < 1e-15);

    const double k1 = 2.0 * std::numbers::pi / 30.0;
    const auto r = dispersion_wr(k1, p);
    CHECK(std::abs(r[0] - cd(0.04677896, -0.37957864)) < 1e-7);
    CHECK(std::abs(r[1] - cd(-0.54677896, 0.0404861)) < 1e-7);
    for (double k : {0.0, 1e-8, 0.1, 0.585, 2.0, 10.0})
      for (const cd& root : dispersion_wr(k, p)) CHECK(std::abs(wr_characteristic(root, k, p)) < 1e-12 * (1.0 + std::pow(k, 4) / p.capillary));
  }

  TEST_CASE("both models share k0; Re(lambda) changes sign there") {
    FlowParameters p;
    const double k0 = critical_wavenumber(p);
    CHECK(k0 == doctest::Approx(0.5850341640289373).epsilon(1e-14));
    CHECK(std::abs(dispersion_benney(k0, p).real()) < 1e-14);
    CHECK(std::abs(dispersion_wr(k0, p)[0].real()) < 1e-12);
    CHECK(dispersion_wr(0.99 * k0, p)[0].real() > 0.0);
    CHECK(dispersion_wr(1.01 * k0, p)[0].real() < 0.0);

    // Bisection on the Benney growth rate agrees with the closed form.
    double lo = 0.05, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (dispersion_benney(mid, p).real() > 0.0 ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(k0).epsilon(1e-12));

    FlowParameters water;
    water.reynolds = 28.2;
    water.capillary = 0.0018;
    CHECK(critical_wavenumber(water) == doctest::Approx(0.2813139510).epsilon(1e-9));
  }

  TEST_CASE("k0 vanishes at and below the critical Reynolds number") {
    FlowParameters p;
    p.reynolds = critical_reynolds(p.theta);
    CHECK(critical_wavenumber(p) == 0.0);
    CHECK(count_unstable_modes(p) == 1);
    p.reynolds *= 0.5;
    CHECK(critical_wavenumber(p) == 0.0);
    p.reynolds = critical_reynolds(p.theta) * (1.0 + 1e-9);
    CHECK(critical_wavenumber(p) > 0.0);
  }

  TEST_CASE("unstable mode counts agree with the Jacobian spectrum") {
    const Grid g(256, 30.0);
    const std::pair<double, double> cases[] = {{1, 0.05}, {5, 0.05}, {10, 0.05}, {20, 0.05},
                                               {1, 0.01}, {5, 0.01}, {10, 0.01}, {20, 0.01}};
    const int expected[] = {1, 5, 9, 11, 1, 3, 3, 5};
    for (int c = 0; c < 8; ++c) {
      FlowParameters p;
      p.reynolds = cases[c].first;
      p.capillary = cases[c].second;
      CAPTURE(p.reynolds);
      CAPTURE(p.capillary);
      CHECK(count_unstable_modes(p) == expected[c]);
      for (Model model : {Model::Benney, Model::WeightedResidual}) {
        const Eigen::MatrixXd j = build_jacobian(model, p, g);
        int unstable = 0;
        for (int m = 0; m < g.size() / 2; ++m) {
          const auto values = grid_mode_eigenvalues(j, model, g, m);
          for (const cd& v : values) {
            if (v.real() > -1e-10) unstable += (m == 0) ? 1 : 2;
          }
        }
        CHECK(unstable == expected[c]);
      }
    }
  }

  TEST_CASE("dense and symbol eigenvalues agree") {
    const Grid g(128, 30.0);
    const FlowParameters p;
    for (Model model : {Model::Benney, Model::WeightedResidual}) {
      const Eigen::MatrixXd j = build_jacobian(model, p, g);
      const Eigen::VectorXcd dense = linalg::eigenvalues(j);
      std::vector<cd> symbol;
      for (int m = -g.size() / 2 + 1; m <= g.size() / 2; ++m)
        for (const cd& v : grid_mode_eigenvalues(j, model, g, m)) symbol.push_back(v);
      const Eigen::VectorXcd sym = Eigen::Map<Eigen::VectorXcd>(symbol.data(), symbol.size());
      REQUIRE(sym.size() == dense.size());
      CHECK(linalg::max_matched_distance(sym, dense) < 1e-8);
    }
  }

  TEST_CASE("second-order convergence of the discrete spectrum") {
    const FlowParameters p;
    for (Model model : {Model::Benney, Model::WeightedResidual}) {
      for (int m = 1; m < 32; ++m) {
        const double e128 = mode_error(model, p, 128, m);
        const double e256 = mode_error(model, p, 256, m);
        const double order = std::log2(e128 / e256);
        CAPTURE(m);
        CHECK(order == doctest::Approx(2.0).epsilon(0.1));
      }
    }
  }

  TEST_CASE("linear system dimensions") {
    const Grid g(64, 30.0);
    const FlowParameters p;
    const ActuatorConfig c = make_actuators(4, 0.1, g);
    const LinearSystem b = build_linear_system(Model::Benney, p, g, c);
    CHECK(b.jacobian.rows() == 64);
    CHECK(b.actuation.cols() == 4);
    CHECK(b.observation.isIdentity());
    const LinearSystem w = build_linear_system(Model::WeightedResidual, p, g, c);
    CHECK(w.state_dim() == 128);
    CHECK(w.actuation.rows() == 128);
  }
}
