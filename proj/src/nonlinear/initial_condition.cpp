#include "filmctl/initial_condition.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "filmctl/errors.hpp"
#include "filmctl/film_flux.hpp"

namespace filmctl {

namespace {

InterfaceState finish(Eigen::VectorXd perturbation, const Grid& grid) {
  perturbation.array() -= perturbation.mean();
  InterfaceState s;
  s.h = Eigen::VectorXd::Ones(grid.size()) + perturbation;
  s.q = local_nusselt_flux(s.h, grid);
  s.time = 0.0;
  return s;
}

}  // namespace

InterfaceState initial_condition(const InitialCondition& kind, const Grid& grid) {
  const int n = grid.size();
  const double two_pi_over_l = 2.0 * std::numbers::pi / grid.aspect();
  if (const auto* single = std::get_if<SingleMode>(&kind)) {
    if (!(single->amplitude > 0.0)) throw InvalidArgument("initial amplitude must be > 0");
    if (single->mode < 1 || single->mode >= n / 2) throw InvalidArgument("initial mode out of range");
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = single->amplitude * std::sin(two_pi_over_l * single->mode * grid.x(i));
    return finish(std::move(p), grid);
  }
  const auto& multi = std::get<MultiMode>(kind);
  if (!(multi.amplitude > 0.0)) throw InvalidArgument("initial amplitude must be > 0");
  if (multi.modes < 1 || multi.modes >= n / 2) throw InvalidArgument("initial mode count out of range");
  std::mt19937_64 rng(multi.seed);
  // Draw raw 53-bit uniforms so the sequence does not depend on the standard
  // library's distribution implementation.
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  for (int m = 1; m <= multi.modes; ++m) {
    const double weight = uniform() / m;
    const double phase = 2.0 * std::numbers::pi * uniform();
    for (int i = 0; i < n; ++i) p[i] += weight * std::sin(two_pi_over_l * m * grid.x(i) + phase);
  }
  p.array() -= p.mean();
  const double peak = p.cwiseAbs().maxCoeff();
  if (peak > 0.0) p *= multi.amplitude / peak;
  return finish(std::move(p), grid);
}

}  // namespace filmctl
