#pragma once

#include <Eigen/Dense>

#include "filmctl/grid.hpp"

namespace filmctl {

/// Periodic second-order node-to-node difference operators.
///   d1: (u[j+1] - u[j-1]) / 2dx
///   d2: (u[j+1] - 2u[j] + u[j-1]) / dx^2
///   d3: (u[j+2] - 2u[j+1] + 2u[j-1] - u[j-2]) / 2dx^3
///   d4: (u[j+2] - 4u[j+1] + 6u[j] - 4u[j-1] + u[j-2]) / dx^4
struct DiffOps {
  Eigen::MatrixXd d1, d2, d3, d4;
};

/// Operators between nodes x_j and faces x_{j+1/2} used by the conservative
/// flux discretisation. divergence * average == d1, divergence * gradient == d2
/// and divergence * third == d4 hold exactly.
struct StaggeredOps {
  Eigen::MatrixXd average;     // face <- node, (u[j] + u[j+1]) / 2
  Eigen::MatrixXd gradient;    // face <- node, (u[j+1] - u[j]) / dx
  Eigen::MatrixXd third;       // face <- node, (u[j+2] - 3u[j+1] + 3u[j] - u[j-1]) / dx^3
  Eigen::MatrixXd divergence;  // node <- face, (Q[j] - Q[j-1]) / dx
  Eigen::MatrixXd face_d1;     // face <- face, (Q[j+1] - Q[j-1]) / 2dx
};

DiffOps build_diff_ops(const Grid& grid);
StaggeredOps build_staggered_ops(const Grid& grid);

/// Dense circulant matrix with `weights[k]` placed at column j + first_offset + k.
Eigen::MatrixXd circulant(const Grid& grid, int first_offset, std::initializer_list<double> weights);

}  // namespace filmctl
