#pragma once

#include <Eigen/Dense>

namespace filmctl {

/// Uniform periodic grid on [0, L). Node i sits at i * dx; cell faces sit at
/// (i + 1/2) * dx and carry the flux in the conservative discretisation.
class Grid {
 public:
  static constexpr int kDefaultPoints = 256;

  Grid(int points, double aspect);

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] double spacing() const noexcept { return dx_; }
  [[nodiscard]] double aspect() const noexcept { return aspect_; }
  [[nodiscard]] double x(int i) const noexcept { return i * dx_; }
  [[nodiscard]] Eigen::VectorXd coordinates() const;

  /// Index arithmetic modulo N (accepts negative indices).
  [[nodiscard]] int wrap(int i) const noexcept {
    const int r = i % n_;
    return r < 0 ? r + n_ : r;
  }

  /// Wavenumber of Fourier mode m, 2 pi m / L.
  [[nodiscard]] double wavenumber(int m) const noexcept;

 private:
  int n_;
  double aspect_;
  double dx_;
};

}  // namespace filmctl
