#pragma once

#include <array>
#include <complex>

#include "filmctl/parameters.hpp"

namespace filmctl {

/// Growth rate of a Fourier mode exp(i k x) for the linearised Benney equation:
///   lambda = -2 i k + (8 Re/15 - 2 cot/3 - k^2 / (3 Ca)) k^2.
std::complex<double> dispersion_benney(double k, const FlowParameters& params);

/// Both roots of the weighted-residual dispersion quadratic
///   lambda^2 + (5/(2 Re) + 34 i k/21) lambda
///     + (5 i k / Re - [4/7 - 5 cot/(3 Re)] k^2 + 5 k^4 / (6 Re Ca)) = 0,
/// ordered by decreasing real part.
std::array<std::complex<double>, 2> dispersion_wr(double k, const FlowParameters& params);

/// Value of the weighted-residual quadratic at lambda (for residual checks).
std::complex<double> wr_characteristic(std::complex<double> lambda, double k,
                                       const FlowParameters& params);

/// Reynolds number below which the flat film is linearly stable, (5/4) cot(theta).
double critical_reynolds(double theta);

/// k0 = sqrt(Ca (8 Re/5 - 2 cot)) for unstable films, 0 otherwise. Shared by
/// both models.
double critical_wavenumber(const FlowParameters& params);

/// n_u = 1 + 2 floor(L k0 / 2 pi): the neutral mass mode plus every +/- pair
/// with 0 < k < k0.
int count_unstable_modes(const FlowParameters& params);

}  // namespace filmctl
