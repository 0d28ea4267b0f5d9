#include "filmctl/min_actuators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "filmctl/dispersion.hpp"
#include "filmctl/errors.hpp"
#include "filmctl/linear_system.hpp"

namespace filmctl {

std::string MinActuatorResult::verdict() const {
  return m_min ? "stabilised" : "not-stabilised(" + std::to_string(m_max) + ")";
}

namespace {

// Deployed gain: N columns acting on the heights.
GainMatrix design_gain(Model design, const FlowParameters& params, const Grid& grid,
                       const ActuatorConfig& actuators, double beta) {
  const LinearSystem sys = build_linear_system(design, params, grid, actuators);
  const CostWeights w = cost_weights(beta, grid, actuators.count, fields_per_point(design));
  GainMatrix k = synthesize_gain(sys, w).gain;
  return design == Model::WeightedResidual ? reduce_wr_gain(k) : k;
}

}  // namespace

MinActuatorResult find_min_actuators(Model design, Model controlled, const FlowParameters& params, int m_max,
                                     const MinActuatorProtocol& protocol) {
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid(protocol.grid_points, params.aspect);

  MinActuatorResult out;
  out.params = params;
  out.n_u = count_unstable_modes(params);
  out.m_max = m_max;

  // One developed wave shared by every M. The Benney film may blow up before
  // saturating; the weighted-residual model then provides the start.
  const InterfaceState initial = initial_condition(protocol.initial, grid);
  SpinUpResult spun;
  try {
    spun = spin_up(controlled, params, grid, initial, protocol.spin);
    out.spin_up_model = to_string(controlled);
  } catch (const BlowUp&) {
    if (controlled == Model::WeightedResidual) throw;
    spun = spin_up(Model::WeightedResidual, params, grid, initial, protocol.spin);
    out.spin_up_model = "wr";
  }

  for (int m = 1; m <= m_max; ++m) {
    ActuatorTrial trial;
    trial.actuators = m;
    const ActuatorConfig act = make_actuators(m, protocol.width, grid);
    GainMatrix k;
    try {
      k = design_gain(design, params, grid, act, protocol.beta);
    } catch (const Error& e) {
      trial.verdict = Verdict::NotStabilised;
      trial.reason = std::string("synthesis failed: ") + e.kind();
      out.trials.push_back(trial);
      continue;
    }
    const LinearSystem target = build_linear_system(controlled, params, grid, act);
    trial.lambda_star = closed_loop(target, k).spectral_abscissa;
    if (protocol.linear_prescreen && trial.lambda_star > 1e-8) {
      trial.verdict = Verdict::NotStabilised;
      trial.reason = "linearised closed loop unstable";
      out.trials.push_back(trial);
      continue;
    }

    ControlPlan plan{k, act, controlled, 0.0};
    RunOptions run;
    run.t_end = protocol.t_end;
    run.beta = protocol.beta;
    run.solver = protocol.solver;
    run.monitor = [](const SimulationResult& r) {
      return classify_run(r, false).verdict != Verdict::Undecided;
    };
    const SimulationResult res = run_controlled(plan, params, grid, spun.state, run);
    const Classification c = classify_run(res, true);
    trial.verdict = c.verdict;
    trial.reason = c.reason;
    trial.fitted_rate = c.rate;
    trial.t_reached = res.times.empty() ? 0.0 : res.times.back();
    out.trials.push_back(trial);
    if (c.verdict == Verdict::Stabilised) {
      out.m_min = m;
      break;
    }
  }
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void StabilityMapSpec::validate() const {
  if (re_values.empty() || ca_values.empty()) throw InvalidArgument("sweep lists must be non-empty");
  for (double v : re_values)
    if (!(v > 0.0)) throw InvalidArgument("sweep Reynolds numbers must be > 0");
  for (double v : ca_values)
    if (!(v > 0.0)) throw InvalidArgument("sweep capillary numbers must be > 0");
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
}

std::vector<MinActuatorResult> run_stability_map(const StabilityMapSpec& spec, int jobs) {
  spec.validate();
  std::vector<double> re = spec.re_values, ca = spec.ca_values;
  std::sort(re.begin(), re.end());
  std::sort(ca.begin(), ca.end());
  std::vector<FlowParameters> cells;
  for (double r : re)
    for (double c : ca) {
      FlowParameters p = spec.base;
      p.reynolds = r;
      p.capillary = c;
      cells.push_back(p);
    }

  std::vector<MinActuatorResult> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = find_min_actuators(spec.design, spec.controlled, cells[i], spec.m_max, spec.protocol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(cells.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace filmctl
