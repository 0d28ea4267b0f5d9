#include "filmctl/diff_ops.hpp"

#include "filmctl/errors.hpp"

namespace filmctl {

Eigen::MatrixXd circulant(const Grid& grid, int first_offset, std::initializer_list<double> weights) {
  const int n = grid.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    int offset = first_offset;
    for (double w : weights) {
      m(j, grid.wrap(j + offset)) += w;
      ++offset;
    }
  }
  return m;
}

DiffOps build_diff_ops(const Grid& grid) {
  if (grid.size() < 8) throw InvalidArgument("difference operators need N >= 8");
  const double dx = grid.spacing();
  const double dx2 = dx * dx;
  const double dx3 = dx2 * dx;
  const double dx4 = dx2 * dx2;
  DiffOps ops;
  ops.d1 = circulant(grid, -1, {-0.5 / dx, 0.0, 0.5 / dx});
  ops.d2 = circulant(grid, -1, {1.0 / dx2, -2.0 / dx2, 1.0 / dx2});
  ops.d3 = circulant(grid, -2, {-0.5 / dx3, 1.0 / dx3, 0.0, -1.0 / dx3, 0.5 / dx3});
  ops.d4 = circulant(grid, -2, {1.0 / dx4, -4.0 / dx4, 6.0 / dx4, -4.0 / dx4, 1.0 / dx4});
  return ops;
}

StaggeredOps build_staggered_ops(const Grid& grid) {
  const double dx = grid.spacing();
  const double dx3 = dx * dx * dx;
  StaggeredOps ops;
  ops.average = circulant(grid, 0, {0.5, 0.5});
  ops.gradient = circulant(grid, 0, {-1.0 / dx, 1.0 / dx});
  ops.third = circulant(grid, -1, {-1.0 / dx3, 3.0 / dx3, -3.0 / dx3, 1.0 / dx3});
  ops.divergence = circulant(grid, -1, {-1.0 / dx, 1.0 / dx});
  ops.face_d1 = circulant(grid, -1, {-0.5 / dx, 0.0, 0.5 / dx});
  return ops;
}

}  // namespace filmctl
