#include "filmctl/interface_state.hpp"

#include <cmath>

#include "filmctl/errors.hpp"

namespace filmctl {

std::string_view to_string(Model model) noexcept {
  return model == Model::Benney ? "benney" : "wr";
}

Model parse_model(std::string_view text) {
  if (text == "benney") return Model::Benney;
  if (text == "wr" || text == "weighted-residual" || text == "weighted_residual") {
    return Model::WeightedResidual;
  }
  throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

bool InterfaceState::physical() const {
  return h.size() > 0 && h.allFinite() && h.minCoeff() > 0.0 && (q.size() == 0 || q.allFinite());
}

InterfaceState nusselt_state(const Grid& grid) {
  InterfaceState state;
  state.h = Eigen::VectorXd::Ones(grid.size());
  state.q = Eigen::VectorXd::Constant(grid.size(), kNusseltFlux);
  return state;
}

double deviation_norm(const Eigen::VectorXd& h, const Grid& grid) {
  return std::sqrt((h.array() - 1.0).square().sum() * grid.spacing());
}

double deviation_norm(const InterfaceState& state, const Grid& grid) {
  return deviation_norm(state.h, grid);
}

}  // namespace filmctl
