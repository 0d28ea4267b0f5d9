#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filmctl/damping_fit.hpp"
#include "filmctl/initial_condition.hpp"
#include "filmctl/simulation.hpp"

namespace filmctl {

/// Experimental protocol shared by every actuator count of one parameter cell.
struct MinActuatorProtocol {
  int grid_points = Grid::kDefaultPoints;
  double beta = kDefaultBeta;
  double width = kDefaultActuatorWidth;
  InitialCondition initial = SingleMode{0.01, 1};
  SpinUpOptions spin{};
  double t_end = 500.0;
  SolverConfig solver{};
  /// Skip the nonlinear run when the linearised closed loop of the controlled
  /// model is already unstable (lambda* > 0 cannot give asymptotic decay).
  bool linear_prescreen = false;
};

struct ActuatorTrial {
  int actuators = 0;
  Verdict verdict = Verdict::Undecided;
  std::string reason;
  double lambda_star = 0.0;  // closed loop of the controlled model's linearisation
  double fitted_rate = 0.0;
  double t_reached = 0.0;
};

struct MinActuatorResult {
  FlowParameters params;
  std::optional<int> m_min;  // empty: not stabilised up to m_max
  int n_u = 0;
  int m_max = 0;
  std::vector<ActuatorTrial> trials;
  std::string spin_up_model;
  double runtime_seconds = 0.0;

  [[nodiscard]] std::string verdict() const;
};

/// Ascending scan over M = 1..m_max. For each M the LQR gain is designed on
/// `design` (weighted-residual gains are reduced to heights), applied to a
/// nonlinear `controlled` run started from one shared spun-up state, and the
/// run is classified with early abort every 10 time units. Synthesis failures
/// count as non-stabilising. Returns at the first stabilising M.
MinActuatorResult find_min_actuators(Model design, Model controlled, const FlowParameters& params, int m_max,
                                     const MinActuatorProtocol& protocol);

struct StabilityMapSpec {
  std::vector<double> re_values;
  std::vector<double> ca_values;
  int m_max = 8;
  Model design = Model::WeightedResidual;
  Model controlled = Model::WeightedResidual;
  FlowParameters base{};  // theta and aspect
  MinActuatorProtocol protocol{};

  void validate() const;
};

/// Runs every (Re, Ca) cell, `jobs` at a time; results are ordered by Re
/// then Ca regardless of completion order.
std::vector<MinActuatorResult> run_stability_map(const StabilityMapSpec& spec, int jobs);

}  // namespace filmctl
