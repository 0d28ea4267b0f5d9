// Acceptance driver: one PASS/FAIL line per criterion.
//
//   acceptance [--only k ...] [--full] [--jobs n]
//
// --full widens the minimum-actuator sweep from the CI grid
// Re in {1, 5}, Ca = 0.05 to Re in {1, 5, 10, 20} x Ca in {0.01, 0.05}.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "filmctl/actuators.hpp"
#include "filmctl/damping_fit.hpp"
#include "filmctl/dispersion.hpp"
#include "filmctl/errors.hpp"
#include "filmctl/fourier_gain.hpp"
#include "filmctl/linalg.hpp"
#include "filmctl/linear_system.hpp"
#include "filmctl/lqr.hpp"
#include "filmctl/min_actuators.hpp"
#include "filmctl/parameters.hpp"
#include "filmctl/simulation.hpp"
#include "filmctl/time_stepper.hpp"

using namespace filmctl;

namespace {

struct Settings {
  bool full = false;
  int jobs = 1;
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a named check; the outcome fails if any check fails.
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[FAILED: " << what << "] ";
    }
  }
};

std::string num(double v, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string name_of(Model m) { return std::string(to_string(m)); }

constexpr int kN = 256;
constexpr int kM = 5;
constexpr double kBeta = 0.5;

FlowParameters params(double re, double ca = 0.05) {
  FlowParameters p;
  p.reynolds = re;
  p.capillary = ca;
  return p;
}

// Developed wave: uncontrolled weighted-residual evolution from a 1% single
// mode (the Benney film blows up before saturating at these Reynolds numbers).
const SpinUpResult& developed_wave(double re, double t_spin = 200.0) {
  static std::map<std::pair<double, double>, SpinUpResult> cache;
  const auto key = std::make_pair(re, t_spin);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const Grid g(kN, kDefaultAspect);
    SpinUpOptions so;
    so.t_spin = t_spin;
    it = cache.emplace(key, spin_up(Model::WeightedResidual, params(re), g,
                                    initial_condition(SingleMode{0.01, 1}, g), so))
             .first;
  }
  return it->second;
}

GainMatrix full_gain(Model design, const FlowParameters& p, const Grid& g, const ActuatorConfig& act) {
  const LinearSystem sys = build_linear_system(design, p, g, act);
  return synthesize_gain(sys, cost_weights(kBeta, g, act.count, fields_per_point(design))).gain;
}

// Gain applied to a nonlinear model: heights only.
GainMatrix deployed(const GainMatrix& full) {
  return full.meta.model == Model::WeightedResidual ? reduce_wr_gain(full) : full;
}

double abscissa(Model model, const FlowParameters& p, const Grid& g, const ActuatorConfig& act, const GainMatrix& k) {
  return closed_loop(build_linear_system(model, p, g, act), k).spectral_abscissa;
}

// Controlled run that stops as soon as the verdict is settled.
SimulationResult monitored_run(const ControlPlan& plan, const FlowParameters& p, const Grid& g,
                               const InterfaceState& start, double t_end) {
  RunOptions o;
  o.t_end = t_end;
  o.beta = kBeta;
  o.monitor = [](const SimulationResult& r) { return classify_run(r, false).verdict != Verdict::Undecided; };
  return run_controlled(plan, p, g, start, o);
}

// Maximum of the norm over consecutive windows of `width` time units. The
// step-level norm of a travelling wave wiggles as crests pass the actuators;
// decay is judged on this envelope. Windows whose maximum is already within
// three decades of the roundoff floor are left out.
std::vector<double> window_envelope(const SimulationResult& r, double width) {
  std::vector<double> env;
  double start = r.activation_time, current = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.times[i] < r.activation_time) continue;
    while (r.times[i] >= start + width) {
      if (any) env.push_back(current);
      start += width;
      current = 0.0;
      any = false;
    }
    current = std::max(current, r.deviation_norms[i]);
    any = true;
  }
  std::vector<double> out;
  for (double v : env)
    if (v > 1e3 * kMachineFloor) out.push_back(v);
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return v.size() >= 2;
}

// ------------------------------------------------------------------ 1
Outcome presets() {
  Outcome o;
  struct Ref {
    const char* name;
    double re, ca;
  };
  const Ref table[] = {{"water", 28.2, 0.0018}, {"ethanol", 12.6, 0.0047}, {"pentane", 178.0, 0.0045},
                       {"nitrogen", 5.69, 5.26e-5}};
  double worst = 0.0;
  for (const Ref& r : table) {
    const auto fluid = find_preset(r.name);
    o.check(fluid.has_value(), std::string("preset ") + r.name);
    if (!fluid) continue;
    const FlowParameters p = from_physical(*fluid);
    const double e_re = std::abs(p.reynolds - r.re) / r.re, e_ca = std::abs(p.capillary - r.ca) / r.ca;
    worst = std::max({worst, e_re, e_ca});
    o.check(e_re <= 0.03 && e_ca <= 0.03, r.name);
    o.detail << r.name << " Re=" << num(p.reynolds) << " Ca=" << num(p.capillary) << "; ";
  }
  o.detail << "worst relative deviation " << num(100 * worst, 3) << "%";
  return o;
}

// ------------------------------------------------------------------ 2
Outcome dispersion_convergence() {
  Outcome o;
  const FlowParameters p;
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    double lo = 1e9, hi = -1e9;
    auto error = [&](int n, int m) {
      const Grid g(n, p.aspect);
      const auto numeric = grid_mode_eigenvalues(build_jacobian(model, p, g), model, g, m);
      const double k = g.wavenumber(m);
      if (model == Model::Benney) return std::abs(numeric[0] - dispersion_benney(k, p));
      const auto exact = dispersion_wr(k, p);
      return std::max(std::abs(numeric[0] - exact[0]), std::abs(numeric[1] - exact[1]));
    };
    for (int m = 1; m < 32; ++m) {
      const double order = std::log2(error(128, m) / error(256, m));
      lo = std::min(lo, order);
      hi = std::max(hi, order);
    }
    o.check(lo >= 1.8 && hi <= 2.2, std::string(name_of(model)) + " order");
    o.detail << name_of(model) << " order in [" << num(lo) << ", " << num(hi) << "] over modes 1..31; ";
  }
  return o;
}

// ------------------------------------------------------------------ 3
Outcome critical_threshold() {
  Outcome o;
  const double theta = kDefaultTheta;
  const double re_c = critical_reynolds(theta);
  o.check(std::abs(re_c - 1.25 / std::tan(theta)) <= 1e-15 * re_c, "Re_c formula");
  FlowParameters p = params(re_c);
  o.check(critical_wavenumber(p) == 0.0, "k0(Re_c) = 0");
  p.reynolds = re_c * (1.0 + 1e-9);
  o.check(critical_wavenumber(p) > 0.0, "k0 > 0 just above Re_c");

  // Bisection in Re on the sign of the long-wave growth rate of both models.
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    const double k = 1e-5;
    auto growth = [&](double re) {
      const FlowParameters q = params(re);
      return model == Model::Benney ? dispersion_benney(k, q).real() : dispersion_wr(k, q)[0].real();
    };
    double lo = 0.1, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (growth(mid) > 0.0 ? hi : lo) = mid;
    }
    o.check(std::abs(hi - re_c) <= 1e-6 * re_c, std::string("bisected threshold ") + name_of(model));
    o.detail << name_of(model) << " bisected Re_c=" << num(hi, 10) << "; ";
  }
  o.detail << "(5/4)cot(theta)=" << num(re_c, 10) << "; ";

  // Bisection in k on the Benney growth rate at the showcase point.
  const FlowParameters s = params(5.0);
  double lo = 1e-3, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dispersion_benney(mid, s).real() > 0.0 ? lo : hi) = mid;
  }
  o.check(std::abs(lo - critical_wavenumber(s)) <= 1e-12, "bisected k0");

  const int n_u = count_unstable_modes(s);
  o.check(n_u == 5, "n_u = 5");
  const Grid g(kN, kDefaultAspect);
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    const Eigen::VectorXcd ev = linalg::eigenvalues(build_jacobian(model, s, g));
    int unstable = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) unstable += ev[i].real() > -1e-10;
    o.check(unstable == n_u, std::string("unstable eigenvalue count ") + name_of(model));
    o.detail << name_of(model) << " unstable eigenvalues=" << unstable << "; ";
  }
  o.detail << "k0=" << num(critical_wavenumber(s), 10) << " n_u=" << n_u;
  return o;
}

// ------------------------------------------------------------------ 4
Outcome care_checks() {
  Outcome o;
  auto m1 = [](double v) { return Eigen::MatrixXd::Constant(1, 1, v); };
  const double a = 0.7, b = 1.3, u = 0.4, v = 0.9;
  const double p_exact = v * (a + std::sqrt(a * a + u * b * b / v)) / (b * b);
  for (CareMethod method : {CareMethod::Schur, CareMethod::Eigenvector}) {
    const CareSolution s = solve_care(m1(a), m1(b), m1(u), m1(v), method);
    o.check(std::abs(s.p(0, 0) - p_exact) <= 1e-10, std::string("scalar ") + to_string(method));
  }
  o.detail << "scalar P exact (both routes); ";

  const FlowParameters p = params(5.0);
  const Grid g(kN, kDefaultAspect);
  const ActuatorConfig act = make_actuators(kM, 0.1, g);
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    const LinearSystem sys = build_linear_system(model, p, g, act);
    const CostWeights w = cost_weights(kBeta, g, kM, fields_per_point(model));
    const GainSynthesis syn = synthesize_gain(sys, w);
    const double bound = 1e-8 * (1.0 + syn.care.p.norm());
    o.check(syn.care.residual <= bound, std::string("residual ") + name_of(model));
    // Scaling U and V together leaves K unchanged.
    double worst = 0.0;
    for (double c : {1e-3, 7.3}) {
      CostWeights scaled = w;
      scaled.u *= c;
      scaled.v *= c;
      const GainMatrix k = synthesize_gain(sys, scaled).gain;
      worst = std::max(worst, (k.k - syn.gain.k).cwiseAbs().maxCoeff());
    }
    o.check(worst <= 1e-10, std::string("cost scaling ") + name_of(model));
    o.detail << name_of(model) << " residual=" << num(syn.care.residual, 3) << " (bound " << num(bound, 3)
             << ", " << to_string(syn.care.method) << "), scaling max|dK|=" << num(worst, 3) << "; ";
  }
  return o;
}

// ------------------------------------------------------------------ 5
Outcome showcase() {
  Outcome o;
  const FlowParameters p = params(5.0);
  const Grid g(kN, kDefaultAspect);
  const ActuatorConfig act = make_actuators(kM, 0.1, g);
  const SpinUpResult& wave = developed_wave(5.0);
  o.detail << "developed WR wave |h|=" << num(wave.final_norm) << "; ";
  for (Model design : {Model::Benney, Model::WeightedResidual}) {
    const std::string name = name_of(design);
    const GainMatrix full = full_gain(design, p, g, act);
    const double l_design = abscissa(design, p, g, act, full);
    o.check(l_design < 0.0, name + " design lambda* < 0");
    const GainMatrix k = deployed(full);
    // Linearisation of the model actually controlled, with the deployed gain.
    const double l_star = abscissa(Model::WeightedResidual, p, g, act, k);
    o.check(l_star < 0.0, name + " deployed lambda* < 0");

    RunOptions ro;
    ro.t_end = 500.0;
    ro.beta = kBeta;
    ro.monitor = [](const SimulationResult& r) { return r.deviation_norms.back() < kMachineFloor; };
    const SimulationResult r = run_controlled(ControlPlan{k, act, Model::WeightedResidual, 0.0}, p, g, wave.state, ro);
    const Classification c = classify_run(r, true);
    o.check(c.verdict == Verdict::Stabilised, name + " verdict");
    const std::vector<double> env = window_envelope(r, 5.0);
    o.check(strictly_decreasing(env), name + " monotone decay");

    // Linear regime: deviation below 1e-3 of the unit film height.
    double t_lin = r.times.back();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r.deviation_norms[i] < 1e-3) {
        t_lin = r.times[i];
        break;
      }
    DampingFitOptions fo;
    fo.ceiling = 1e-3;
    double rate = std::nan("");
    try {
      rate = fit_damping_rate(r.times, r.deviation_norms, t_lin, fo).rate;
    } catch (const filmctl::Error& e) {
      o.check(false, name + " damping fit: " + e.what());
    }
    const double rel = std::abs(rate - l_star) / std::abs(l_star);
    o.check(rel <= 0.10, name + " fitted rate within 10% of lambda*");
    o.detail << name << "-designed: lambda*(design)=" << num(l_design) << " lambda*(deployed on WR)=" << num(l_star)
             << " fitted=" << num(rate) << " (" << num(100 * rel, 3) << "%), " << env.size()
             << " decreasing 5-unit windows, verdict " << to_string(c.verdict) << " at t=" << num(r.times.back())
             << "; ";
  }
  return o;
}

// ------------------------------------------------------------------ 6
Outcome blow_up() {
  Outcome o;
  const FlowParameters p = params(10.0);
  const Grid g(kN, kDefaultAspect);
  const SpinUpResult& wave = developed_wave(10.0, 400.0);
  o.check(wave.saturated, "saturated wave");
  o.detail << "WR spin-up saturated=" << (wave.saturated ? "yes" : "no") << " after t=" << num(wave.duration)
           << " |h|=" << num(wave.final_norm) << "; ";

  RunOptions ro;
  ro.t_end = 50.0;
  const SimulationResult benney = run_uncontrolled(Model::Benney, p, g, wave.state, ro);
  o.check(benney.termination == Termination::BlowUp && benney.termination_time < 50.0, "Benney blow-up before t=50");
  o.detail << "Benney from saturated wave: " << to_string(benney.termination) << " at t="
           << num(benney.termination_time) << "; ";

  ro.t_end = 300.0;
  const SimulationResult wr = run_uncontrolled(Model::WeightedResidual, p, g, wave.state, ro);
  o.check(wr.termination == Termination::Completed, "WR completes [0, 300] from the saturated wave");
  const SimulationResult wr_small =
      run_uncontrolled(Model::WeightedResidual, p, g, initial_condition(SingleMode{0.01, 1}, g), ro);
  o.check(wr_small.termination == Termination::Completed, "WR completes [0, 300] from a small start");
  const SimulationResult benney_small =
      run_uncontrolled(Model::Benney, p, g, initial_condition(SingleMode{0.01, 1}, g), ro);
  o.detail << "WR: " << to_string(wr.termination) << " to t=" << num(wr.termination_time)
           << " (final |h_hat|=" << num(wr.deviation_norms.back()) << ") and from 1% mode " << to_string(wr_small.termination)
           << " to t=" << num(wr_small.termination_time) << "; Benney from 1% mode: "
           << to_string(benney_small.termination) << " at t=" << num(benney_small.termination_time);
  return o;
}

// ------------------------------------------------------------------ 7
Outcome cross_model() {
  Outcome o;
  const Grid g(kN, kDefaultAspect);
  const ActuatorConfig act = make_actuators(kM, 0.1, g);
  for (double re : {5.0, 10.0}) {
    const FlowParameters p = params(re);
    const GainMatrix k = full_gain(Model::Benney, p, g, act);
    const double l = abscissa(Model::WeightedResidual, p, g, act, k);
    o.check(l < 0.0, "Benney gain on WR lambda* at Re=" + num(re));
    const SimulationResult r =
        monitored_run(ControlPlan{k, act, Model::WeightedResidual, 0.0}, p, g, developed_wave(re).state, 500.0);
    const Classification c = classify_run(r, true);
    o.check(c.verdict == Verdict::Stabilised, "Benney gain on WR verdict at Re=" + num(re));
    o.detail << "Re=" << num(re) << " Benney->WR: lambda*=" << num(l) << ", " << to_string(c.verdict) << " by t="
             << num(r.times.back()) << "; ";
  }

  const FlowParameters p = params(10.0);
  const GainMatrix k = deployed(full_gain(Model::WeightedResidual, p, g, act));
  const double l = abscissa(Model::Benney, p, g, act, k);
  o.check(l > 0.0, "WR gain on Benney lambda* > 0 at Re=10");
  const ControlPlan plan{k, act, Model::Benney, 0.0};
  const SimulationResult from_wave = monitored_run(plan, p, g, developed_wave(10.0).state, 500.0);
  const Classification c_wave = classify_run(from_wave, true);
  o.check(c_wave.verdict == Verdict::NotStabilised, "WR gain on Benney verdict from the developed wave");
  const SimulationResult from_small = monitored_run(plan, p, g, initial_condition(SingleMode{0.01, 1}, g), 500.0);
  const Classification c_small = classify_run(from_small, true);
  o.check(c_small.verdict == Verdict::NotStabilised, "WR gain on Benney verdict from a 1% mode");
  // Informational contrast: the Benney film itself is controllable from the
  // same small start with its own gain.
  const GainMatrix kb = full_gain(Model::Benney, p, g, act);
  const SimulationResult own =
      monitored_run(ControlPlan{kb, act, Model::Benney, 0.0}, p, g, initial_condition(SingleMode{0.01, 1}, g), 500.0);
  o.detail << "Re=10 WR->Benney: lambda*=" << num(l) << ", from developed wave " << to_string(c_wave.verdict) << " ("
           << c_wave.reason << " at t=" << num(from_wave.times.back()) << "), from 1% mode "
           << to_string(c_small.verdict) << " (" << c_small.reason << " at t=" << num(from_small.times.back()) << "); contrast Benney->Benney from 1% mode: "
           << to_string(classify_run(own, true).verdict) << " by t=" << num(own.times.back());
  return o;
}

// ------------------------------------------------------------------ 8
Outcome minimum_actuators(const Settings& s) {
  Outcome o;
  StabilityMapSpec spec;
  spec.re_values = s.full ? std::vector<double>{1, 5, 10, 20} : std::vector<double>{1, 5};
  spec.ca_values = s.full ? std::vector<double>{0.01, 0.05} : std::vector<double>{0.05};
  spec.m_max = 12;
  spec.design = Model::WeightedResidual;
  spec.controlled = Model::WeightedResidual;
  const auto cells = run_stability_map(spec, s.jobs);
  for (const MinActuatorResult& c : cells) {
    const std::string cell = "Re=" + num(c.params.reynolds) + ",Ca=" + num(c.params.capillary);
    o.check(c.m_min.has_value() && *c.m_min <= c.n_u, cell);
    o.detail << cell << ": M_min=" << (c.m_min ? std::to_string(*c.m_min) : "none") << " n_u=" << c.n_u << " ("
             << num(c.runtime_seconds, 3) << " s); ";
  }
  o.detail << (s.full ? "full grid" : "CI grid");
  return o;
}

// ------------------------------------------------------------------ 9
Outcome conservation_symmetry() {
  Outcome o;
  const Grid g(kN, kDefaultAspect);
  const ActuatorConfig act = make_actuators(kM, 0.1, g);

  // Discrete mass balance of each BDF2 step under forcing.
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    FilmStepper stepper(model, params(5.0), g);
    stepper.reset(initial_condition(SingleMode{0.05, 1}, g));
    Eigen::VectorXd u(kM);
    u << 0.01, -0.02, 0.005, 0.0, 0.015;
    const Eigen::VectorXd f = assemble_forcing(u, act, g);
    double m_prev = 0.0, dt_prev = 0.0, m_now = stepper.state().h.mean(), worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const StepOutcome out = stepper.step(f);
      if (!out.ok()) {
        o.check(false, "forced step failed");
        break;
      }
      const double m_new = stepper.state().h.mean();
      double lhs;
      if (i == 0) {
        lhs = (m_new - m_now) / out.dt;
      } else {
        const double w = out.dt / dt_prev;
        lhs = ((1.0 + 2.0 * w) / (1.0 + w) * m_new - (1.0 + w) * m_now + w * w / (1.0 + w) * m_prev) / out.dt;
      }
      worst = std::max(worst, std::abs(lhs - f.mean()));
      m_prev = m_now;
      m_now = m_new;
      dt_prev = out.dt;
    }
    o.check(worst <= 1e-10, std::string("mass balance ") + name_of(model));
    o.detail << name_of(model) << " mass balance " << num(worst, 3) << "/step; ";
  }

  // Mean-height drift over 1e4 uncontrolled steps (Benney at Re = 2, below
  // its blow-up range; weighted-residual at the showcase Re = 5).
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    FilmStepper stepper(model, params(model == Model::Benney ? 2.0 : 5.0), g);
    stepper.reset(initial_condition(MultiMode{0.05, 3}, g));
    const double m0 = stepper.state().h.mean();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kN);
    int steps = 0;
    for (; steps < 10000; ++steps)
      if (!stepper.step(zero).ok()) break;
    o.check(steps == 10000, std::string("1e4 steps ") + name_of(model));
    const double drift = std::abs(stepper.state().h.mean() - m0);
    o.check(drift <= 1e-12, std::string("drift ") + name_of(model));
    o.detail << name_of(model) << " drift " << num(drift, 3) << " over " << steps << " steps; ";
  }

  // Fourier-restricted gain leaves the stable spectrum untouched.
  {
    const Grid gf(128, kDefaultAspect);
    const ActuatorConfig af = make_actuators(kM, 0.1, gf);
    const LinearSystem sys = build_linear_system(Model::Benney, params(5.0), gf, af);
    const GainMatrix k = fourier_restricted_gain(sys, cost_weights(kBeta, gf, kM), gf);
    const ClosedLoop cl = closed_loop(sys, k);
    const Eigen::VectorXcd open = linalg::eigenvalues(sys.jacobian);
    std::vector<std::complex<double>> stable;
    for (Eigen::Index i = 0; i < open.size(); ++i)
      if (open[i].real() < -1e-10) stable.push_back(open[i]);
    const double d = linalg::max_matched_distance(
        Eigen::Map<Eigen::VectorXcd>(stable.data(), static_cast<Eigen::Index>(stable.size())), cl.eigenvalues);
    o.check(d <= 1e-10 && cl.spectral_abscissa < 0.0, "Fourier gain stable spectrum");
    o.detail << "Fourier gain (N=128): " << stable.size() << " stable eigenvalues moved by " << num(d, 3)
             << ", lambda*=" << num(cl.spectral_abscissa) << "; ";
  }

  // Rows of K are cyclic shifts by N/M for grid-aligned actuators.
  for (int m : {4, 8}) {
    const ActuatorConfig a = make_actuators(m, 0.1, g);
    const GainMatrix k = full_gain(Model::Benney, params(5.0), g, a);
    const int shift = kN / m;
    double worst = 0.0;
    for (int r = 0; r + 1 < m; ++r)
      for (int c = 0; c < kN; ++c) worst = std::max(worst, std::abs(k.k(r + 1, g.wrap(c + shift)) - k.k(r, c)));
    o.check(worst <= 1e-8, "circulant M=" + std::to_string(m));
    o.detail << "row-shift symmetry M=" << m << ": " << num(worst, 3) << "; ";
  }
  return o;
}

// ------------------------------------------------------------------ 10
Outcome newton_bdf2() {
  Outcome o;
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    const Grid g(64, kDefaultAspect);
    const FlowParameters p = params(8.0);
    FilmStepper stepper(model, p, g);
    stepper.reset(initial_condition(MultiMode{0.2, 7, 5}, g));
    const Eigen::VectorXd y = stepper.pack(stepper.state());
    ImplicitStage stage;
    stage.c0 = 1.5;
    stage.dt = 0.05;
    stage.history = -1.5 * y;
    stage.forcing = Eigen::VectorXd::Constant(g.size(), 0.01);
    const Eigen::MatrixXd analytic = Eigen::MatrixXd(stepper.jacobian(y, stage));
    double worst = 0.0;
    for (Eigen::Index c = 0; c < y.size(); ++c) {
      const double eps = 1e-6 * std::max(1.0, std::abs(y[c]));
      Eigen::VectorXd yp = y, ym = y;
      yp[c] += eps;
      ym[c] -= eps;
      const Eigen::VectorXd fd = (stepper.residual(yp, stage) - stepper.residual(ym, stage)) / (2.0 * eps);
      worst = std::max(worst, (fd - analytic.col(c)).norm() / std::max(analytic.col(c).norm(), 1e-300));
    }
    o.check(worst <= 1e-6, std::string("Jacobian ") + name_of(model));
    o.detail << name_of(model) << " Jacobian vs FD " << num(worst, 3) << "; ";
  }
  for (Model model : {Model::Benney, Model::WeightedResidual}) {
    const Grid g(64, kDefaultAspect);
    auto run = [&](double dt) {
      SolverConfig cfg;
      cfg.dt_max = dt;
      FilmStepper stepper(model, params(5.0), g, cfg);
      stepper.reset(initial_condition(SingleMode{0.1, 1}, g));
      if (!stepper.advance(4.0, Eigen::VectorXd::Zero(g.size())).ok()) o.check(false, "time stepping");
      return stepper.pack(stepper.state());
    };
    const Eigen::VectorXd ref = run(0.025 / 8.0);
    const double e1 = (run(0.05) - ref).cwiseAbs().maxCoeff();
    const double e2 = (run(0.025) - ref).cwiseAbs().maxCoeff();
    const double order = std::log2(e1 / e2);
    o.check(std::abs(order - 2.0) <= 0.25, std::string("temporal order ") + name_of(model));
    o.detail << name_of(model) << " temporal order " << num(order) << "; ";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks, one PASS/FAIL line per criterion", "acceptance"};
  Settings settings;
  settings.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<int> only;
  app.add_flag("--full", settings.full, "Full minimum-actuator grid (hours)");
  app.add_option("--jobs", settings.jobs, "Parallel cells for the minimum-actuator sweep");
  app.add_option("--only", only, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"preset fidelity", presets},
      {"dispersion convergence", dispersion_convergence},
      {"critical threshold and n_u", critical_threshold},
      {"CARE correctness", care_checks},
      {"showcase stabilisation", showcase},
      {"blow-up dichotomy", blow_up},
      {"cross-model asymmetry", cross_model},
      {"minimum actuators", [&] { return minimum_actuators(settings); }},
      {"conservation and symmetry", conservation_symmetry},
      {"Newton/BDF2 checks", newton_bdf2},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      Outcome o = criteria[i].second();
      pass = o.pass;
      detail = o.detail.str();
    } catch (const filmctl::Error& e) {
      detail = std::string("error ") + e.kind() + ": " + e.what();
    } catch (const std::exception& e) {
      detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << " (" << num(secs, 3)
              << " s): " << detail << std::endl;
    failed += !pass;
  }
  return failed == 0 ? 0 : 1;
}
