#pragma once

#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "filmctl/grid.hpp"
#include "filmctl/interface_state.hpp"
#include "filmctl/newton.hpp"
#include "filmctl/parameters.hpp"

namespace filmctl {

inline constexpr double kDefaultTimeStep = 0.05;

struct SolverConfig {
  double dt_max = kDefaultTimeStep;
  double newton_tol = 1e-10;
  int newton_max_iter = 12;
  double blowup_threshold = 10.0;
  /// Smallest step tried after repeated Newton failures, as a fraction of dt_max.
  double min_step_fraction = 1.0 / 1024.0;
  /// Newton failures with max h above this count as blow-up.
  double blowup_failure_height = 2.0;

  void validate() const;  // throws InvalidArgument
};

enum class StepStatus { Ok, BlowUp, NewtonFailure };
[[nodiscard]] const char* to_string(StepStatus status) noexcept;

struct StepOutcome {
  StepStatus status = StepStatus::Ok;
  double time = 0.0;          // time reached (or at which the failure happened)
  double dt = 0.0;            // step actually taken
  int newton_iters = 0;       // iterations of the accepted attempt
  int rejected_attempts = 0;  // Newton failures that triggered a step reduction

  [[nodiscard]] bool ok() const noexcept { return status == StepStatus::Ok; }
};

/// One implicit stage of the (variable-step) BDF2 scheme:
///   (c0 y^{n+1} + history) / dt = F(y^{n+1}; f)
/// Backward Euler is c0 = 1, history = -y^n.
struct ImplicitStage {
  double c0 = 1.0;
  Eigen::VectorXd history;
  double dt = kDefaultTimeStep;
  Eigen::VectorXd forcing;  // node forcing, held fixed across the step
};

/// Conservative implicit integrator for the nonlinear Benney (unknowns h) and
/// weighted-residual (unknowns [h; q], q at the cell faces) film models:
///   h_t + (q_{j+1/2} - q_{j-1/2}) / dx = f_j.
/// Each step solves the BDF2 residual by Newton iteration with the exact
/// sparse Jacobian. The first step after reset() is backward Euler. When
/// Newton fails the step is halved and retried; subsequent steps grow by 1.5x
/// back to dt_max.
class FilmStepper {
 public:
  FilmStepper(Model model, const FlowParameters& params, const Grid& grid, SolverConfig config = {});

  /// Replaces the state and discards the BDF2 history. For the
  /// weighted-residual model a missing flux is initialised to 2h^3/3 at faces.
  void reset(const InterfaceState& state);

  [[nodiscard]] const InterfaceState& state() const noexcept { return state_; }
  [[nodiscard]] Model model() const noexcept { return model_; }
  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] const SolverConfig& config() const noexcept { return config_; }
  [[nodiscard]] const FlowParameters& params() const noexcept { return params_; }
  /// Step size the next call to step() will try first.
  [[nodiscard]] double next_dt() const noexcept { return dt_next_; }

  /// Advances one step with the node forcing held fixed. `max_dt` clips the
  /// step (used to land on an output time). On failure the state is left at
  /// the last accepted step.
  StepOutcome step(const Eigen::VectorXd& forcing, double max_dt = 0.0);

  /// Unforced (or constant-forcing) integration up to exactly `t_end`.
  StepOutcome advance(double t_end, const Eigen::VectorXd& forcing);

  /// Packs/unpacks the unknown vector ([h] or [h; q]).
  [[nodiscard]] Eigen::VectorXd pack(const InterfaceState& s) const;
  void unpack(const Eigen::VectorXd& y, InterfaceState& s) const;

  /// Residual of the implicit stage and its exact Jacobian (exposed for tests).
  [[nodiscard]] Eigen::VectorXd residual(const Eigen::VectorXd& y, const ImplicitStage& stage) const;
  [[nodiscard]] Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& y,
                                                     const ImplicitStage& stage) const;

 private:
  [[nodiscard]] bool blown_up(const Eigen::VectorXd& y) const;

  Model model_;
  FlowParameters params_;
  Grid grid_;
  SolverConfig config_;
  InterfaceState state_;
  std::optional<Eigen::VectorXd> previous_;  // y^{n-1}
  double dt_previous_ = 0.0;
  double dt_next_ = kDefaultTimeStep;
};

}  // namespace filmctl
