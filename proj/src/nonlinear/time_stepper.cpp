#include "filmctl/time_stepper.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "filmctl/errors.hpp"
#include "filmctl/film_flux.hpp"

namespace filmctl {

namespace {

using Triplet = Eigen::Triplet<double>;

// Offsets k = -1..2 of the nodes entering face j (between nodes j and j+1),
// and the derivatives of the face quantities with respect to h_{j+k}.
constexpr std::array<int, 4> kFaceOffsets{-1, 0, 1, 2};

struct FaceDerivatives {
  std::array<double, 4> dh{};    // dH/dh_{j+k}
  std::array<double, 4> dhx{};   // dHx/dh_{j+k}
  std::array<double, 4> dh3{};   // dH3/dh_{j+k}
};

FaceDerivatives face_derivatives(double dx) {
  const double dx3 = dx * dx * dx;
  FaceDerivatives d;
  d.dh = {0.0, 0.5, 0.5, 0.0};
  d.dhx = {0.0, -1.0 / dx, 1.0 / dx, 0.0};
  d.dh3 = {-1.0 / dx3, 3.0 / dx3, -3.0 / dx3, 1.0 / dx3};
  return d;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw InvalidArgument("solver.dt must be > 0");
  if (!(newton_tol > 0.0)) throw InvalidArgument("solver.newton_tol must be > 0");
  if (newton_max_iter < 1) throw InvalidArgument("solver.newton_max_iter must be >= 1");
  if (!(blowup_threshold > 1.0)) throw InvalidArgument("solver.blowup_threshold must be > 1");
  if (!(min_step_fraction > 0.0 && min_step_fraction <= 1.0))
    throw InvalidArgument("min_step_fraction must lie in (0, 1]");
}

const char* to_string(StepStatus status) noexcept {
  switch (status) {
    case StepStatus::Ok: return "completed";
    case StepStatus::BlowUp: return "blow-up";
    case StepStatus::NewtonFailure: return "newton-failure";
  }
  return "unknown";
}

FilmStepper::FilmStepper(Model model, const FlowParameters& params, const Grid& grid,
                         SolverConfig config)
    : model_(model), params_(params), grid_(grid), config_(config) {
  params_.validate();
  config_.validate();
  dt_next_ = config_.dt_max;
  reset(nusselt_state(grid_));
}

void FilmStepper::reset(const InterfaceState& state) {
  const int n = grid_.size();
  if (state.h.size() != n) throw InvalidArgument("state length does not match the grid");
  state_ = state;
  if (model_ == Model::WeightedResidual) {
    if (!state_.has_flux()) state_.q = local_nusselt_flux(state_.h, grid_);
    if (state_.q.size() != n) throw InvalidArgument("flux length does not match the grid");
  }
  previous_.reset();
  dt_previous_ = 0.0;
  dt_next_ = config_.dt_max;
}

Eigen::VectorXd FilmStepper::pack(const InterfaceState& s) const {
  if (model_ == Model::Benney) return s.h;
  Eigen::VectorXd y(2 * grid_.size());
  y << s.h, s.q;
  return y;
}

void FilmStepper::unpack(const Eigen::VectorXd& y, InterfaceState& s) const {
  const int n = grid_.size();
  s.h = y.head(n);
  if (model_ == Model::WeightedResidual) s.q = y.tail(n);
}

Eigen::VectorXd FilmStepper::residual(const Eigen::VectorXd& y, const ImplicitStage& stage) const {
  const int n = grid_.size();
  const Eigen::VectorXd h = y.head(n);
  const Eigen::VectorXd rate = (stage.c0 * y + stage.history) / stage.dt;
  Eigen::VectorXd r(y.size());
  if (model_ == Model::Benney) {
    const Eigen::VectorXd q = benney_flux(h, stage.forcing, params_, grid_);
    r = rate + face_divergence(q, grid_) - stage.forcing;
    return r;
  }
  const Eigen::VectorXd q = y.tail(n);
  r.head(n) = rate.head(n) + face_divergence(q, grid_) - stage.forcing;
  const Eigen::VectorXd rhs = wr_flux_rhs(h, q, stage.forcing, params_, grid_);
  const FaceStencil s = face_stencil(h, stage.forcing, grid_);
  const double a = 2.0 * params_.reynolds / 5.0;
  r.tail(n) = (a * s.h.array().square() * rate.tail(n).array() + q.array() - rhs.array()).matrix();
  return r;
}

Eigen::SparseMatrix<double> FilmStepper::jacobian(const Eigen::VectorXd& y,
                                                  const ImplicitStage& stage) const {
  const int n = grid_.size();
  const double dx = grid_.spacing();
  const double re = params_.reynolds;
  const double ca = params_.capillary;
  const double cot = params_.cot_theta();
  const double diag = stage.c0 / stage.dt;
  const FaceDerivatives fd = face_derivatives(dx);
  const Eigen::VectorXd h = y.head(n);
  const FaceStencil s = face_stencil(h, stage.forcing, grid_);

  std::vector<Triplet> t;
  if (model_ == Model::Benney) {
    t.reserve(static_cast<std::size_t>(n) * 9);
    for (int j = 0; j < n; ++j) {
      const double hf = s.h[j];
      const double h2 = hf * hf;
      const double h3 = h2 * hf;
      const double bracket = 2.0 - 2.0 * cot * s.hx[j] + s.hxxx[j] / ca;
      const double q_h = h2 * bracket +
                         re * (48.0 * h3 * h2 * s.hx[j] / 15.0 - 8.0 * h3 * s.f[j] / 3.0);
      const double q_hx = -2.0 * cot * h3 / 3.0 + 8.0 * re * h3 * h3 / 15.0;
      const double q_h3 = h3 / (3.0 * ca);
      for (std::size_t k = 0; k < kFaceOffsets.size(); ++k) {
        const double dq = q_h * fd.dh[k] + q_hx * fd.dhx[k] + q_h3 * fd.dh3[k];
        const int col = grid_.wrap(j + kFaceOffsets[k]);
        // Face j enters the divergence of node j (+) and node j+1 (-).
        t.emplace_back(j, col, dq / dx);
        t.emplace_back(grid_.wrap(j + 1), col, -dq / dx);
      }
      t.emplace_back(j, j, diag);
    }
  } else {
    const Eigen::VectorXd q = y.tail(n);
    const Eigen::VectorXd rate_q = (stage.c0 * q + stage.history.tail(n)) / stage.dt;
    const double a = 2.0 * re / 5.0;
    t.reserve(static_cast<std::size_t>(n) * 14);
    for (int j = 0; j < n; ++j) {
      // Mass equation: rate + (Q_j - Q_{j-1}) / dx - f.
      t.emplace_back(j, j, diag);
      t.emplace_back(j, n + j, 1.0 / dx);
      t.emplace_back(j, n + grid_.wrap(j - 1), -1.0 / dx);

      // Flux equation at face j: a H^2 Q_rate + Q - RHS(H, Hx, H3, Q, Qx).
      const double hf = s.h[j];
      const double h2 = hf * hf;
      const double h3 = h2 * hf;
      const double qj = q[j];
      const double qx = (q[grid_.wrap(j + 1)] - q[grid_.wrap(j - 1)]) / (2.0 * dx);
      const double bracket = 2.0 - 2.0 * cot * s.hx[j] + s.hxxx[j] / ca;
      const double rhs_h = h2 * bracket + re * (-34.0 * qj * qx / 35.0 + qj * s.f[j] / 5.0);
      const double rhs_hx = -2.0 * cot * h3 / 3.0 + 18.0 * re * qj * qj / 35.0;
      const double rhs_h3 = h3 / (3.0 * ca);
      const double rhs_q = re * (36.0 * qj * s.hx[j] / 35.0 - 34.0 * hf * qx / 35.0 + hf * s.f[j] / 5.0);
      const double rhs_qx = -34.0 * re * hf * qj / 35.0;
      const double r_h = 2.0 * a * hf * rate_q[j] - rhs_h;
      for (std::size_t k = 0; k < kFaceOffsets.size(); ++k) {
        const double dr = r_h * fd.dh[k] - rhs_hx * fd.dhx[k] - rhs_h3 * fd.dh3[k];
        t.emplace_back(n + j, grid_.wrap(j + kFaceOffsets[k]), dr);
      }
      t.emplace_back(n + j, n + j, a * h2 * diag + 1.0 - rhs_q);
      t.emplace_back(n + j, n + grid_.wrap(j + 1), -rhs_qx / (2.0 * dx));
      t.emplace_back(n + j, n + grid_.wrap(j - 1), rhs_qx / (2.0 * dx));
    }
  }
  Eigen::SparseMatrix<double> jac(y.size(), y.size());
  jac.setFromTriplets(t.begin(), t.end());
  return jac;
}

bool FilmStepper::blown_up(const Eigen::VectorXd& y) const {
  const auto h = y.head(grid_.size());
  if (!h.allFinite()) return true;
  return h.maxCoeff() > config_.blowup_threshold || h.minCoeff() <= 0.0;
}

StepOutcome FilmStepper::step(const Eigen::VectorXd& forcing, double max_dt) {
  if (forcing.size() != grid_.size()) throw InvalidArgument("forcing length does not match the grid");
  const Eigen::VectorXd current = pack(state_);
  const double dt_min = config_.dt_max * config_.min_step_fraction;
  const NewtonOptions newton{config_.newton_tol, config_.newton_max_iter, 1};

  StepOutcome out;
  double dt = dt_next_;
  double worst_height = current.head(grid_.size()).maxCoeff();
  for (;;) {
    const double dt_try = max_dt > 0.0 ? std::min(dt, max_dt) : dt;
    ImplicitStage stage;
    stage.dt = dt_try;
    stage.forcing = forcing;
    Eigen::VectorXd guess = current;
    if (previous_) {
      const double w = dt_try / dt_previous_;
      stage.c0 = (1.0 + 2.0 * w) / (1.0 + w);
      stage.history = -(1.0 + w) * current + (w * w / (1.0 + w)) * *previous_;
      guess = current + w * (current - *previous_);
    } else {
      stage.c0 = 1.0;
      stage.history = -current;
    }

    NewtonResult res = newton_solve([&](const Eigen::VectorXd& y) { return residual(y, stage); },
                                    [&](const Eigen::VectorXd& y) { return jacobian(y, stage); },
                                    guess, newton);
    if (res.converged() && res.x.allFinite()) {
      previous_ = current;
      dt_previous_ = dt_try;
      unpack(res.x, state_);
      state_.time += dt_try;
      out.time = state_.time;
      out.dt = dt_try;
      out.newton_iters = res.iterations;
      // Restore the step gradually after reductions or clipping; the growth
      // factor 1.5 keeps variable-step BDF2 zero-stable.
      dt_next_ = std::min(config_.dt_max, 1.5 * dt_try);
      if (blown_up(res.x)) out.status = StepStatus::BlowUp;
      return out;
    }

    if (res.x.head(grid_.size()).allFinite())
      worst_height = std::max(worst_height, res.x.head(grid_.size()).maxCoeff());
    ++out.rejected_attempts;
    if (dt_try <= dt_min * (1.0 + 1e-12)) {
      out.time = state_.time;
      out.dt = dt_try;
      out.newton_iters = res.iterations;
      const bool blow = worst_height > config_.blowup_failure_height || !res.x.allFinite();
      out.status = blow ? StepStatus::BlowUp : StepStatus::NewtonFailure;
      return out;
    }
    dt = std::max(0.5 * dt_try, dt_min);
  }
}

StepOutcome FilmStepper::advance(double t_end, const Eigen::VectorXd& forcing) {
  StepOutcome out;
  out.time = state_.time;
  while (t_end - state_.time > 1e-12 * std::max(1.0, std::abs(t_end))) {
    out = step(forcing, t_end - state_.time);
    if (!out.ok()) return out;
    if (std::abs(t_end - state_.time) <= 1e-12 * std::max(1.0, std::abs(t_end))) state_.time = t_end;
  }
  return out;
}

}  // namespace filmctl
