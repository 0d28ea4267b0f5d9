#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "filmctl/grid.hpp"

namespace filmctl {

enum class Model { Benney, WeightedResidual };

[[nodiscard]] std::string_view to_string(Model model) noexcept;
/// Accepts "benney" and "wr" / "weighted-residual"; throws InvalidArgument otherwise.
[[nodiscard]] Model parse_model(std::string_view text);

/// Number of unknowns per grid point of the model (1 for Benney, 2 for WR).
[[nodiscard]] constexpr int fields_per_point(Model model) noexcept {
  return model == Model::Benney ? 1 : 2;
}

/// Film heights at the grid nodes and, for the weighted-residual model, the
/// flux at the cell faces (entry j is the flux at x_j + dx/2). The Benney
/// stepper ignores `q` and leaves it untouched.
struct InterfaceState {
  Eigen::VectorXd h;
  Eigen::VectorXd q;
  double time = 0.0;

  [[nodiscard]] bool has_flux() const noexcept { return q.size() > 0; }
  [[nodiscard]] bool physical() const;
};

inline constexpr double kNusseltFlux = 2.0 / 3.0;

/// Flat film h = 1, q = 2/3 at t = 0.
[[nodiscard]] InterfaceState nusselt_state(const Grid& grid);

/// (sum_i (h_i - 1)^2 dx)^{1/2}.
[[nodiscard]] double deviation_norm(const InterfaceState& state, const Grid& grid);
[[nodiscard]] double deviation_norm(const Eigen::VectorXd& h, const Grid& grid);

}  // namespace filmctl
