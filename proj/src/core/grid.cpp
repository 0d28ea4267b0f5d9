#include "filmctl/grid.hpp"

#include <cmath>
#include <numbers>

#include "filmctl/errors.hpp"

namespace filmctl {

Grid::Grid(int points, double aspect) : n_(points), aspect_(aspect), dx_(aspect / points) {
  if (points < 8 || points % 2 != 0) throw InvalidArgument("grid size must be even and >= 8");
  if (!(aspect > 0.0) || !std::isfinite(aspect)) throw InvalidArgument("aspect must be > 0");
}

Eigen::VectorXd Grid::coordinates() const {
  Eigen::VectorXd xs(n_);
  for (int i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

double Grid::wavenumber(int m) const noexcept { return 2.0 * std::numbers::pi * m / aspect_; }

}  // namespace filmctl
