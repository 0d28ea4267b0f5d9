#pragma once

#include <limits>
#include <string>
#include <vector>

#include "filmctl/simulation.hpp"

namespace filmctl {

inline constexpr double kMachineFloor = 1e-11;

struct DampingFitOptions {
  /// Fraction of the post-activation span skipped as initial transient.
  double transient_fraction = 0.1;
  /// Samples below this norm are dominated by roundoff and ignored.
  double floor = kMachineFloor;
  /// Samples above this norm are ignored (set it to restrict the fit to the
  /// linear regime).
  double ceiling = std::numeric_limits<double>::infinity();
  int min_samples = 20;
};

struct DampingFit {
  double rate = 0.0;      // slope of log ||h_hat||, negative means decay
  double t_begin = 0.0;   // fit window
  double t_end = 0.0;
  double residual = 0.0;  // RMS misfit of log ||h_hat||
  int samples = 0;
  bool confident = false; // same slope sign over windows ending at 60%, 80%, 100%
};

/// Least-squares exponential rate of the deviation norm after activation.
/// Throws InsufficientData with fewer than `min_samples` usable samples.
DampingFit fit_damping_rate(const std::vector<double>& times, const std::vector<double>& norms,
                            double activation_time, const DampingFitOptions& options = {});
DampingFit fit_damping_rate(const SimulationResult& result, const DampingFitOptions& options = {});

struct VerdictOptions {
  double reduction = 1e3;  // required drop of the norm from activation
  double floor = kMachineFloor;
};

enum class Verdict { Stabilised, NotStabilised, Undecided };
[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct Classification {
  Verdict verdict = Verdict::Undecided;
  std::string reason;
  double rate = 0.0;
};

/// Stabilised: the norm reached the floor, or fell by `reduction` with a
/// confident negative fitted rate. Not stabilised: blow-up or Newton failure,
/// a confident positive rate with the norm above its activation value, or
/// (when `final` is set) anything else at the end of the run.
Classification classify_run(const SimulationResult& result, bool final, const VerdictOptions& options = {});

}  // namespace filmctl
