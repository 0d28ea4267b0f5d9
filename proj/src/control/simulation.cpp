#include "filmctl/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "filmctl/damping_fit.hpp"
#include "filmctl/errors.hpp"
#include "filmctl/film_flux.hpp"

namespace filmctl {

void ControlPlan::validate(const Grid& grid) const {
  const int n = grid.size();
  if (actuators.grid_points != n) throw InvalidArgument("actuators were built for a different grid");
  if (gain.rows() != actuators.count)
    throw InvalidArgument("gain rows (" + std::to_string(gain.rows()) + ") != actuator count (" +
                          std::to_string(actuators.count) + ")");
  if (gain.cols() == n) return;
  if (gain.cols() == 2 * n && controlled_model == Model::WeightedResidual) return;
  throw InvalidArgument("gain has " + std::to_string(gain.cols()) + " columns; expected " +
                        std::to_string(n) +
                        (controlled_model == Model::WeightedResidual ? " or " + std::to_string(2 * n) : ""));
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Stopped: return "stopped";
    case Termination::BlowUp: return "blow-up";
    case Termination::NewtonFailure: return "newton-failure";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd observe(const InterfaceState& s, int columns, int n) {
  if (columns == n) return (s.h.array() - 1.0).matrix();
  Eigen::VectorXd x(2 * n);
  x << (s.h.array() - 1.0).matrix(), (s.q.array() - kNusseltFlux).matrix();
  return x;
}

}  // namespace

SimulationResult run_controlled(const ControlPlan& plan, const FlowParameters& params, const Grid& grid,
                                const InterfaceState& start, const RunOptions& options) {
  plan.validate(grid);
  if (!(options.beta > 0.0 && options.beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  const int n = grid.size();
  const int m = plan.actuators.count;
  const Eigen::MatrixXd bumps = bump_matrix(plan.actuators, grid);
  const double dx = grid.spacing();

  FilmStepper stepper(plan.controlled_model, params, grid, options.solver);
  stepper.reset(start);

  SimulationResult r;
  r.beta = options.beta;
  r.activation_time = plan.activation_time;
  double next_snapshot = start.time;
  double next_monitor = start.time + options.monitor_interval;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  // Computes the control for the current state and records a sample.
  auto sample = [&]() {
    const InterfaceState& s = stepper.state();
    if (s.time >= plan.activation_time) {
      u = plan.gain.k * observe(s, plan.gain.cols(), n);
      f = bumps * u;
    } else {
      u.setZero();
      f.setZero();
    }
    const double norm = deviation_norm(s.h, grid);
    const double energy = f.squaredNorm() * dx;
    const double density = options.beta * norm * norm + (1.0 - options.beta) * energy;
    double cost = 0.0;
    if (!r.times.empty()) {
      const double prev_density = options.beta * r.deviation_norms.back() * r.deviation_norms.back() +
                                  (1.0 - options.beta) * r.forcing_energy.back();
      cost = r.accumulated_cost.back() + 0.5 * (density + prev_density) * (s.time - r.times.back());
    }
    r.times.push_back(s.time);
    r.deviation_norms.push_back(norm);
    r.controls.push_back(u);
    r.forcing_energy.push_back(energy);
    r.accumulated_cost.push_back(cost);
    if (options.snapshot_every > 0.0 && s.time >= next_snapshot - 1e-9) {
      r.snapshots.push_back(s);
      while (next_snapshot <= s.time + 1e-9) next_snapshot += options.snapshot_every;
    }
  };

  sample();
  const double eps = 1e-9 * std::max(1.0, std::abs(options.t_end));
  while (stepper.state().time < options.t_end - eps) {
    // Forcing is lagged: f was computed from the state at the start of the step.
    const StepOutcome out = stepper.step(f, options.t_end - stepper.state().time);
    if (out.status == StepStatus::NewtonFailure) {
      r.termination = Termination::NewtonFailure;
      r.termination_time = out.time;
      return r;
    }
    sample();
    if (out.status == StepStatus::BlowUp) {
      r.termination = Termination::BlowUp;
      r.termination_time = out.time;
      return r;
    }
    if (options.monitor && stepper.state().time >= next_monitor - 1e-9) {
      next_monitor += options.monitor_interval;
      if (options.monitor(r)) {
        r.termination = Termination::Stopped;
        r.termination_time = stepper.state().time;
        return r;
      }
    }
  }
  r.termination = Termination::Completed;
  r.termination_time = stepper.state().time;
  return r;
}

SimulationResult run_uncontrolled(Model model, const FlowParameters& params, const Grid& grid,
                                  const InterfaceState& start, const RunOptions& options) {
  ControlPlan plan;
  plan.actuators = make_actuators(1, kDefaultActuatorWidth, grid);
  plan.gain.k = Eigen::MatrixXd::Zero(1, grid.size());
  plan.controlled_model = model;
  plan.activation_time = std::numeric_limits<double>::infinity();
  return run_controlled(plan, params, grid, start, options);
}

SpinUpResult spin_up(Model model, const FlowParameters& params, const Grid& grid,
                     const InterfaceState& initial, const SpinUpOptions& options) {
  if (!(options.t_spin >= 0.0)) throw InvalidArgument("t_spin must be >= 0");
  SpinUpResult out;
  out.state = initial;
  if (model == Model::WeightedResidual && !out.state.has_flux())
    out.state.q = local_nusselt_flux(out.state.h, grid);
  out.final_norm = deviation_norm(initial.h, grid);
  if (options.t_spin == 0.0) {
    out.state.time = 0.0;
    return out;
  }

  FilmStepper stepper(model, params, grid, options.solver);
  InterfaceState s0 = initial;
  s0.time = 0.0;
  stepper.reset(s0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(grid.size());
  // Norm sampled once per time unit for the saturation test.
  std::vector<double> samples{deviation_norm(s0.h, grid)};
  const int window = static_cast<int>(std::lround(options.saturation_window));
  for (int t = 1; t <= static_cast<int>(std::ceil(options.t_spin - 1e-9)); ++t) {
    const double target = std::min(static_cast<double>(t), options.t_spin);
    const StepOutcome o = stepper.advance(target, zero);
    if (o.status == StepStatus::BlowUp)
      throw BlowUp("uncontrolled " + std::string(to_string(model)) + " film blew up at t=" + std::to_string(o.time));
    if (o.status == StepStatus::NewtonFailure)
      throw NewtonFailure("Newton iteration failed during spin-up at t=" + std::to_string(o.time));
    samples.push_back(deviation_norm(stepper.state().h, grid));
    if (options.stop_on_saturation && window > 0 && static_cast<int>(samples.size()) > window) {
      const auto first = samples.end() - (window + 1);
      const auto [lo, hi] = std::minmax_element(first, samples.end());
      if (*hi - *lo <= options.saturation_tolerance * *hi) {
        out.saturated = true;
        break;
      }
    }
  }
  out.duration = stepper.state().time;
  out.state = stepper.state();
  out.state.time = 0.0;
  out.final_norm = samples.back();
  return out;
}

CostReport evaluate_cost(const SimulationResult& result, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in [0, 1]");
  CostReport rep;
  const std::size_t n = result.size();
  if (n == 0) {
    rep.tail_bound = 0.0;
    return rep;
  }
  auto density = [&](std::size_t i) {
    return beta * result.deviation_norms[i] * result.deviation_norms[i] +
           (1.0 - beta) * result.forcing_energy[i];
  };
  for (std::size_t i = 1; i < n; ++i)
    rep.cost += 0.5 * (density(i) + density(i - 1)) * (result.times[i] - result.times[i - 1]);
  rep.horizon = result.times.back() - result.times.front();
  const double last = density(n - 1);
  if (last == 0.0) {
    rep.tail_bound = 0.0;
    return rep;
  }
  // Uncontrolled records never activate; their tail follows the free decay.
  const double from = result.activation_time <= result.times.back() ? result.activation_time : result.times.front();
  try {
    const DampingFit fit = fit_damping_rate(result.times, result.deviation_norms, from);
    if (fit.rate < 0.0) rep.tail_bound = last / (2.0 * -fit.rate);
  } catch (const InsufficientData&) {
  }
  return rep;
}

}  // namespace filmctl
