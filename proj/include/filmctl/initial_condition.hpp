#pragma once

#include <cstdint>
#include <variant>

#include "filmctl/grid.hpp"
#include "filmctl/interface_state.hpp"

namespace filmctl {

/// h = 1 + amplitude * sin(2 pi mode x / L).
struct SingleMode {
  double amplitude = 0.01;
  int mode = 1;
};

/// h = 1 + sum over the first `modes` Fourier modes with seeded random phases
/// and amplitudes, rescaled so the largest deviation equals `amplitude`.
struct MultiMode {
  double amplitude = 0.01;
  std::uint64_t seed = 1;
  int modes = 8;
};

using InitialCondition = std::variant<SingleMode, MultiMode>;

/// Perturbed Nusselt film with zero-mean perturbation (mean(h) = 1 up to
/// roundoff) and the local Nusselt flux q = 2H^3/3 at the faces, so the
/// state is ready for either model.
InterfaceState initial_condition(const InitialCondition& kind, const Grid& grid);

}  // namespace filmctl
