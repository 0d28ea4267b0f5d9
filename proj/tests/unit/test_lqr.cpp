#include <doctest.h>

#include <cmath>
#include <sstream>

#include "filmctl/actuators.hpp"
#include "filmctl/controllability.hpp"
#include "filmctl/diff_ops.hpp"
#include "filmctl/errors.hpp"
#include "filmctl/fourier_gain.hpp"
#include "filmctl/gain_io.hpp"
#include "filmctl/linalg.hpp"
#include "filmctl/linear_system.hpp"
#include "filmctl/lqr.hpp"

using namespace filmctl;

namespace {

Eigen::MatrixXd m1(double x) { return Eigen::MatrixXd::Constant(1, 1, x); }

struct Showcase {
  Grid grid{256, 30.0};
  FlowParameters params{};
  ActuatorConfig actuators = make_actuators(5, 0.1, grid);
  LinearSystem system;
  CostWeights weights;
  explicit Showcase(Model model, int m = 5, int n = 256) : grid(n, 30.0) {
    actuators = make_actuators(m, 0.1, grid);
    system = build_linear_system(model, params, grid, actuators);
    weights = cost_weights(0.5, grid, m, fields_per_point(model));
  }
};

}  // namespace

TEST_SUITE("lqr") {
  TEST_CASE("cost weights") {
    const Grid g(256, 30.0);
    const CostWeights w = cost_weights(0.5, g, 5);
    CHECK(w.u.rows() == 256);
    CHECK(w.u(3, 3) == doctest::Approx(15.0 / 256.0).epsilon(1e-15));
    CHECK(w.u(3, 4) == 0.0);
    CHECK(w.v(0, 0) == 0.5);
    CHECK(cost_weights(0.5, g, 5, 2).u.rows() == 512);
    CHECK_THROWS_AS(cost_weights(1.0, g, 5), InvalidArgument);
    CHECK_THROWS_AS(cost_weights(0.0, g, 5), InvalidArgument);
    CHECK_THROWS_AS(cost_weights(1.5, g, 5), InvalidArgument);
  }

  TEST_CASE("scalar CARE closed form, both methods") {
    const double a = 0.7, b = 1.3, u = 0.4, v = 0.9;
    const double p_exact = v * (a + std::sqrt(a * a + u * b * b / v)) / (b * b);
    CHECK(p_exact == doctest::Approx(0.9660630165823101).epsilon(1e-15));
    for (CareMethod method : {CareMethod::Schur, CareMethod::Eigenvector}) {
      const CareSolution s = solve_care(m1(a), m1(b), m1(u), m1(v), method);
      CHECK(std::abs(s.p(0, 0) - p_exact) < 1e-10);
      CHECK(s.residual < 1e-12);
      const LinearSystem sys = LinearSystem::from_matrices(m1(a), m1(b));
      CostWeights w{0.5, m1(u), m1(v)};
      const GainMatrix k = gain(s.p, sys, w);
      CHECK(std::abs(k.k(0, 0) - (-b * p_exact / v)) < 1e-10);
      CHECK(std::abs(k.k(0, 0) - (-1.3954243572855591)) < 1e-10);
    }
  }

  TEST_CASE("diagonal CARE: stable J") {
    const Eigen::MatrixXd i3 = Eigen::MatrixXd::Identity(3, 3);
    const CareSolution s = solve_care(-i3, i3, i3, i3);
    CHECK((s.p - (std::sqrt(2.0) - 1.0) * i3).cwiseAbs().maxCoeff() < 1e-12);

    // No actuation: K = 0 (P solves a Lyapunov equation).
    const LinearSystem sys = LinearSystem::from_matrices(-i3, Eigen::MatrixXd::Zero(3, 2));
    CostWeights w{0.5, i3, Eigen::MatrixXd::Identity(2, 2)};
    const GainSynthesis g = synthesize_gain(sys, w);
    CHECK(g.gain.k.isZero(0.0));
    CHECK((g.care.p - 0.5 * i3).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("non-stabilisable pair is rejected") {
    Eigen::MatrixXd j(2, 2);
    j << 1.0, 0.0, 0.0, -1.0;
    Eigen::MatrixXd psi(2, 1);
    psi << 0.0, 1.0;
    CHECK_THROWS_AS(solve_care(j, psi, Eigen::MatrixXd::Identity(2, 2), m1(1.0)), NonStabilisable);
  }

  TEST_CASE("Benney showcase synthesis") {
    const Showcase s(Model::Benney);
    const GainSynthesis g = synthesize_gain(s.system, s.weights);
    const Eigen::MatrixXd& p = g.care.p;
    CHECK(g.care.residual <= 1e-8 * (1.0 + p.norm()));
    CHECK((p - p.transpose()).norm() <= 1e-10 * p.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p).eigenvalues().minCoeff() >= -1e-8 * p.norm());
    const ClosedLoop cl = closed_loop(s.system, g.gain);
    CHECK(cl.spectral_abscissa < 0.0);
    CHECK(cl.spectral_abscissa <= linalg::spectral_abscissa(s.system.jacobian) + 1e-10);
    CHECK(std::abs(cl.spectral_abscissa - linalg::spectral_abscissa(cl.eigenvalues)) < 1e-12);

    // Eigenvector route agrees.
    const CareSolution e = solve_care(s.system, s.weights, CareMethod::Eigenvector);
    CHECK((e.p - p).norm() <= 1e-8 * (1.0 + p.norm()));
    CHECK(e.residual <= 1e-8 * (1.0 + e.p.norm()));

    // Cost scaling leaves K unchanged.
    CostWeights scaled = s.weights;
    scaled.u *= 7.5;
    scaled.v *= 7.5;
    const GainSynthesis g2 = synthesize_gain(s.system, scaled);
    CHECK((g2.gain.k - g.gain.k).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + g.gain.k.cwiseAbs().maxCoeff()));
  }

  TEST_CASE("weighted-residual showcase synthesis and reduction") {
    const Showcase s(Model::WeightedResidual);
    const GainSynthesis g = synthesize_gain(s.system, s.weights);
    CHECK(g.care.residual <= 1e-8 * (1.0 + g.care.p.norm()));
    const ClosedLoop full = closed_loop(s.system, g.gain);
    CHECK(full.spectral_abscissa < 0.0);

    const GainMatrix reduced = reduce_wr_gain(g.gain);
    CHECK(reduced.cols() == 256);
    CHECK(reduced.meta.reduced);
    const ClosedLoop red = closed_loop(s.system, reduced);
    CHECK(red.spectral_abscissa < 0.0);
    // A modest penalty relative to the full-state gain.
    CHECK(red.spectral_abscissa >= full.spectral_abscissa - 1e-9);
    CHECK(red.spectral_abscissa <= 0.5 * full.spectral_abscissa);

    // With q_hat = 2 avg(h_hat) the full and reduced gains give the same u.
    Eigen::VectorXd h = Eigen::VectorXd::Random(256);
    Eigen::VectorXd x(512);
    x << h, 2.0 * build_staggered_ops(s.grid).average * h;
    const Eigen::VectorXd u_full = g.gain.k * x;
    const Eigen::VectorXd u_red = reduced.k * h;
    CHECK((u_full - u_red).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + u_full.cwiseAbs().maxCoeff()));

    // K_q = 0 leaves K_h.
    GainMatrix hk = g.gain;
    hk.k.rightCols(256).setZero();
    CHECK((reduce_wr_gain(hk).k - hk.k.leftCols(256)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("closed loop without feedback and lambda* monotone in beta") {
    const Showcase s(Model::Benney, 5, 128);
    const ClosedLoop open = closed_loop(s.system, Eigen::MatrixXd::Zero(5, 128));
    CHECK(open.spectral_abscissa == doctest::Approx(linalg::spectral_abscissa(s.system.jacobian)).epsilon(1e-12));
    double last = 1e300;
    for (double beta : {0.2, 0.5, 0.8}) {
      const GainSynthesis g = synthesize_gain(s.system, cost_weights(beta, s.grid, 5));
      const double l = closed_loop(s.system, g.gain).spectral_abscissa;
      CHECK(l <= last + 1e-10);
      last = l;
    }
  }

  TEST_CASE("circulant symmetry and actuator relabelling") {
    const Showcase s(Model::Benney, 4);
    const GainMatrix k = synthesize_gain(s.system, s.weights).gain;
    const int shift = 256 / 4;
    double worst = 0.0;
    for (int r = 0; r + 1 < 4; ++r)
      for (int c = 0; c < 256; ++c) worst = std::max(worst, std::abs(k.k(r + 1, s.grid.wrap(c + shift)) - k.k(r, c)));
    CHECK(worst <= 1e-8);

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
    perm.indices() << 2, 0, 3, 1;
    const LinearSystem permuted = LinearSystem::from_matrices(s.system.jacobian, s.system.actuation * perm.transpose());
    const GainMatrix kp = synthesize_gain(permuted, s.weights).gain;
    CHECK((kp.k - perm * k.k).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + k.k.cwiseAbs().maxCoeff()));
  }

  TEST_CASE("Kalman rank test") {
    CHECK(kalman_controllable(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(3, 3)).controllable);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
    j(0, 0) = 1.0;
    j(1, 1) = 2.0;
    Eigen::MatrixXd psi(2, 1);
    psi << 1.0, 0.0;
    const RankReport r = kalman_controllable(j, psi);
    CHECK_FALSE(r.controllable);
    CHECK(r.rank == 1);
    const Showcase s(Model::Benney, 1, 64);
    const RankReport big = kalman_controllable(s.system);
    CHECK(big.dimension == 64);
    CHECK(big.rank >= 1);
    CHECK(big.rank <= 64);
    MESSAGE("Benney, M=1, N=64: Kalman numerical rank " << big.rank);
  }

  TEST_CASE("stabilisability test") {
    CHECK(stabilisable(-Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Zero(3, 1)).stabilisable);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
    j(0, 0) = 1.0;
    j(1, 1) = -1.0;
    Eigen::MatrixXd psi(2, 1);
    psi << 0.0, 1.0;
    CHECK_FALSE(stabilisable(j, psi).stabilisable);
    const Showcase s(Model::Benney);
    const StabilisabilityReport r = stabilisable(s.system);
    CHECK(r.stabilisable);
    CHECK(r.unstable_eigenvalues == 5);
  }

  TEST_CASE("Fourier-restricted gain keeps the stable spectrum") {
    const Showcase s(Model::Benney, 5, 128);
    const UnstableSubspace sub = unstable_fourier_subspace(s.system, s.grid);
    CHECK(sub.unstable_modes == 5);
    const GainMatrix k = fourier_restricted_gain(s.system, s.weights, s.grid);
    const ClosedLoop cl = closed_loop(s.system, k);
    CHECK(cl.spectral_abscissa < 0.0);
    // Stable open-loop eigenvalues reappear unchanged in the closed loop.
    const Eigen::VectorXcd open = linalg::eigenvalues(s.system.jacobian);
    std::vector<std::complex<double>> stable;
    for (Eigen::Index i = 0; i < open.size(); ++i)
      if (open[i].real() < -1e-10) stable.push_back(open[i]);
    CHECK(stable.size() == 128 - 5);
    const Eigen::VectorXcd st = Eigen::Map<Eigen::VectorXcd>(stable.data(), stable.size());
    CHECK(linalg::max_matched_distance(st, cl.eigenvalues) < 1e-10);

    const Showcase four(Model::Benney, 4, 128);
    CHECK_THROWS_AS(fourier_restricted_gain(four.system, four.weights, four.grid), InsufficientActuators);

    FlowParameters stable_film;
    stable_film.reynolds = 0.5;
    // Only the neutral mass mode remains: a single actuator suffices.
    const ActuatorConfig one = make_actuators(1, 0.1, s.grid);
    const LinearSystem st_sys = build_linear_system(Model::Benney, stable_film, s.grid, one);
    const GainMatrix k1 = fourier_restricted_gain(st_sys, cost_weights(0.5, s.grid, 1), s.grid);
    CHECK(k1.rows() == 1);
    CHECK(closed_loop(st_sys, k1).spectral_abscissa < 0.0);
  }

  TEST_CASE("gain file round trip") {
    const Showcase s(Model::Benney, 3, 64);
    const GainMatrix k = synthesize_gain(s.system, s.weights).gain;
    std::stringstream buf;
    write_gain(buf, k);
    const GainMatrix back = read_gain(buf);
    CHECK(back.meta == k.meta);
    REQUIRE(back.k.rows() == k.k.rows());
    REQUIRE(back.k.cols() == k.k.cols());
    CHECK((back.k.array() == k.k.array()).all());

    std::stringstream broken("filmctl-gain\nversion = 1\nmodel = benney\n");
    CHECK_THROWS_AS(read_gain(broken), IoError);
  }
}
