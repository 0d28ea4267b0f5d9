#include "filmctl/damping_fit.hpp"

#include <algorithm>
#include <cmath>

#include "filmctl/errors.hpp"

namespace filmctl {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& t, const std::vector<double>& y, std::size_t count) {
  // Centred sums keep the normal equations well conditioned for late windows.
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    tm += t[i];
    ym += y[i];
  }
  tm /= static_cast<double>(count);
  ym /= static_cast<double>(count);
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (y[i] - ym);
  }
  LineFit f;
  f.slope = stt > 0.0 ? sty / stt : 0.0;
  f.intercept = ym - f.slope * tm;
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = y[i] - (f.intercept + f.slope * t[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / static_cast<double>(count));
  return f;
}

}  // namespace

DampingFit fit_damping_rate(const std::vector<double>& times, const std::vector<double>& norms,
                            double activation_time, const DampingFitOptions& options) {
  if (times.size() != norms.size()) throw InvalidArgument("times and norms differ in length");
  // Post-activation span, then skip the initial transient.
  double t_last = activation_time;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= activation_time) t_last = std::max(t_last, times[i]);
  const double t_start = activation_time + options.transient_fraction * (t_last - activation_time);

  std::vector<double> t, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_start || times[i] < activation_time) continue;
    if (!(norms[i] >= options.floor) || norms[i] > options.ceiling) continue;
    t.push_back(times[i]);
    y.push_back(std::log(norms[i]));
  }
  if (static_cast<int>(t.size()) < options.min_samples)
    throw InsufficientData("only " + std::to_string(t.size()) + " usable samples for the damping fit (need " +
                           std::to_string(options.min_samples) + ")");

  const LineFit all = least_squares(t, y, t.size());
  DampingFit fit;
  fit.rate = all.slope;
  fit.residual = all.rms;
  fit.samples = static_cast<int>(t.size());
  fit.t_begin = t.front();
  fit.t_end = t.back();

  // Expanding windows ending at 60% and 80% of the usable span.
  const double span = t.back() - t.front();
  bool same_sign = all.slope != 0.0;
  for (double frac : {0.6, 0.8}) {
    const double end = t.front() + frac * span;
    const auto count = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), end) - t.begin());
    if (static_cast<int>(count) < std::max(3, options.min_samples / 2)) {
      same_sign = false;
      break;
    }
    const LineFit part = least_squares(t, y, count);
    if ((part.slope < 0.0) != (all.slope < 0.0) || part.slope == 0.0) same_sign = false;
  }
  fit.confident = same_sign;
  return fit;
}

DampingFit fit_damping_rate(const SimulationResult& result, const DampingFitOptions& options) {
  return fit_damping_rate(result.times, result.deviation_norms, result.activation_time, options);
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stabilised: return "stabilised";
    case Verdict::NotStabilised: return "not-stabilised";
    case Verdict::Undecided: return "undecided";
  }
  return "unknown";
}

Classification classify_run(const SimulationResult& result, bool final, const VerdictOptions& options) {
  Classification c;
  if (result.termination == Termination::BlowUp || result.termination == Termination::NewtonFailure) {
    c.verdict = Verdict::NotStabilised;
    c.reason = to_string(result.termination);
    return c;
  }
  // Norm at activation and the smallest norm since.
  double at_activation = -1.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (result.times[i] < result.activation_time) continue;
    if (at_activation < 0.0) at_activation = result.deviation_norms[i];
    smallest = std::min(smallest, result.deviation_norms[i]);
  }
  if (at_activation < 0.0) {
    c.verdict = final ? Verdict::NotStabilised : Verdict::Undecided;
    c.reason = "controls never activated";
    return c;
  }
  if (smallest < options.floor) {
    c.verdict = Verdict::Stabilised;
    c.reason = "reached the machine-precision floor";
    return c;
  }
  try {
    const DampingFit fit = fit_damping_rate(result);
    c.rate = fit.rate;
    const double current = result.deviation_norms.back();
    if (fit.confident && fit.rate < 0.0 && current <= at_activation / options.reduction) {
      c.verdict = Verdict::Stabilised;
      c.reason = "confident decay with the required reduction";
      return c;
    }
    if (fit.confident && fit.rate > 0.0 && current > at_activation) {
      c.verdict = Verdict::NotStabilised;
      c.reason = "confident growth";
      return c;
    }
  } catch (const InsufficientData&) {
  }
  c.verdict = final ? Verdict::NotStabilised : Verdict::Undecided;
  c.reason = final ? "no sufficient reduction by the end of the run" : "pending";
  return c;
}

}  // namespace filmctl
