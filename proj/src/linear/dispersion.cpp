#include "filmctl/dispersion.hpp"

#include <cmath>
#include <numbers>

namespace filmctl {

using cplx = std::complex<double>;

std::complex<double> dispersion_benney(double k, const FlowParameters& params) {
  const double re = params.reynolds;
  const double growth = (8.0 * re / 15.0 - 2.0 * params.cot_theta() / 3.0 -
                         k * k / (3.0 * params.capillary)) * k * k;
  return {growth, -2.0 * k};
}

namespace {

struct Quadratic {
  cplx b, c;
};

Quadratic wr_coefficients(double k, const FlowParameters& params) {
  const double re = params.reynolds;
  const double ca = params.capillary;
  const double cot = params.cot_theta();
  const cplx i{0.0, 1.0};
  const cplx b = 5.0 / (2.0 * re) + (34.0 / 21.0) * i * k;
  const cplx c = 5.0 * i * k / re - (4.0 / 7.0 - 5.0 * cot / (3.0 * re)) * k * k +
                 5.0 * k * k * k * k / (6.0 * re * ca);
  return {b, c};
}

}  // namespace

std::array<std::complex<double>, 2> dispersion_wr(double k, const FlowParameters& params) {
  const auto [b, c] = wr_coefficients(k, params);
  const cplx disc = std::sqrt(b * b - 4.0 * c);
  // Cancellation-free pair: one root from the larger-magnitude combination,
  // the other from the product of roots.
  const cplx q = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0.0 ? disc : -disc));
  cplx r1 = q;
  cplx r2 = (std::abs(q) > 0.0) ? c / q : cplx{0.0, 0.0};
  if (std::abs(q) == 0.0) r1 = 0.0;
  if (r2.real() > r1.real()) std::swap(r1, r2);
  return {r1, r2};
}

std::complex<double> wr_characteristic(std::complex<double> lambda, double k,
                                       const FlowParameters& params) {
  const auto [b, c] = wr_coefficients(k, params);
  return lambda * lambda + b * lambda + c;
}

double critical_reynolds(double theta) { return 1.25 / std::tan(theta); }

double critical_wavenumber(const FlowParameters& params) {
  // Ca (8 Re/5 - 2 cot) written as 1.6 Ca (Re - Re_c) so the threshold is exact.
  const double excess = params.reynolds - critical_reynolds(params.theta);
  if (excess <= 0.0) return 0.0;
  return std::sqrt(1.6 * params.capillary * excess);
}

int count_unstable_modes(const FlowParameters& params) {
  const double k0 = critical_wavenumber(params);
  const double scaled = params.aspect * k0 / (2.0 * std::numbers::pi);
  // Modes with k_m < k0 strictly: m < scaled.
  int pairs = static_cast<int>(std::floor(scaled));
  if (pairs > 0 && static_cast<double>(pairs) == scaled) --pairs;
  return 1 + 2 * pairs;
}

}  // namespace filmctl
