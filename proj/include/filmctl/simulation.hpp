#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "filmctl/actuators.hpp"
#include "filmctl/initial_condition.hpp"
#include "filmctl/lqr.hpp"
#include "filmctl/time_stepper.hpp"

namespace filmctl {

/// Which gain drives which nonlinear model, and from when.
struct ControlPlan {
  GainMatrix gain;
  ActuatorConfig actuators;
  Model controlled_model = Model::WeightedResidual;
  double activation_time = 0.0;

  /// Throws InvalidArgument unless the gain has `actuators.count` rows and N
  /// columns (heights observed), or 2N columns with a weighted-residual
  /// controlled model (heights and face fluxes observed).
  void validate(const Grid& grid) const;
};

enum class Termination { Completed, Stopped, BlowUp, NewtonFailure };
[[nodiscard]] const char* to_string(Termination t) noexcept;

/// Time series of a (controlled) run, one sample per accepted time step plus
/// the initial state.
struct SimulationResult {
  std::vector<double> times;
  std::vector<double> deviation_norms;   // ||h - 1||_2 with the dx weight
  std::vector<Eigen::VectorXd> controls; // u at each sample (zero before activation)
  std::vector<double> forcing_energy;    // sum_j f_j^2 dx at each sample
  std::vector<double> accumulated_cost;  // running trapezoid integral of the cost density
  double beta = kDefaultBeta;
  double activation_time = 0.0;
  Termination termination = Termination::Completed;
  double termination_time = 0.0;
  std::vector<InterfaceState> snapshots;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  [[nodiscard]] double final_cost() const noexcept {
    return accumulated_cost.empty() ? 0.0 : accumulated_cost.back();
  }
};

struct RunOptions {
  double t_end = 500.0;
  double beta = kDefaultBeta;
  SolverConfig solver{};
  /// Keep a copy of the state every `snapshot_every` time units (0: none).
  double snapshot_every = 0.0;
  /// Called every `monitor_interval` time units; returning true stops the run.
  std::function<bool(const SimulationResult&)> monitor;
  double monitor_interval = 10.0;
};

/// Feedback u(t) = K * deviation at the start of each step, forcing
/// f = sum_i u_i d_i held through the implicit step. The result is returned
/// even when the stepper fails; `termination` records why it ended.
SimulationResult run_controlled(const ControlPlan& plan, const FlowParameters& params, const Grid& grid,
                                const InterfaceState& start, const RunOptions& options);

/// Uncontrolled evolution (equivalent to a zero-gain plan).
SimulationResult run_uncontrolled(Model model, const FlowParameters& params, const Grid& grid,
                                  const InterfaceState& start, const RunOptions& options);

struct SpinUpOptions {
  double t_spin = 200.0;
  bool stop_on_saturation = true;
  double saturation_window = 50.0;     // time units
  double saturation_tolerance = 0.05;  // relative spread of the norm over the window
  SolverConfig solver{};
};

struct SpinUpResult {
  InterfaceState state;  // relabelled to t = 0
  double duration = 0.0;
  bool saturated = false;
  double final_norm = 0.0;
};

/// Lets a perturbation develop without control for t_spin time units or until
/// the deviation norm saturates, whichever comes first. Throws BlowUp or
/// NewtonFailure when the stepper fails.
SpinUpResult spin_up(Model model, const FlowParameters& params, const Grid& grid,
                     const InterfaceState& initial, const SpinUpOptions& options);

struct CostReport {
  double cost = 0.0;
  double horizon = 0.0;
  /// Estimate of the neglected tail, integrand(t_end) / (2 |rate|) for a
  /// decaying run; infinity when the run is not decaying at the end.
  double tail_bound = std::numeric_limits<double>::infinity();
};

/// Trapezoid approximation of int_0^T [beta ||h||^2 + (1 - beta) ||f||^2] dt.
CostReport evaluate_cost(const SimulationResult& result, double beta);

}  // namespace filmctl
