#pragma once

#include <Eigen/Dense>

#include "filmctl/grid.hpp"
#include "filmctl/parameters.hpp"

namespace filmctl {

/// Face values of the height and its derivatives used by both flux models:
/// entry j belongs to the face x_{j+1/2}.
struct FaceStencil {
  Eigen::VectorXd h;    // (h[j] + h[j+1]) / 2
  Eigen::VectorXd hx;   // (h[j+1] - h[j]) / dx
  Eigen::VectorXd hxxx; // (h[j+2] - 3h[j+1] + 3h[j] - h[j-1]) / dx^3
  Eigen::VectorXd f;    // (f[j] + f[j+1]) / 2
};
FaceStencil face_stencil(const Eigen::VectorXd& h, const Eigen::VectorXd& f, const Grid& grid);

/// Benney flux at the faces,
///   q = (h^3/3)(2 - 2 h_x cot + h_xxx/Ca) + Re (8 h^6 h_x / 15 - 2 h^4 f / 3).
Eigen::VectorXd benney_flux(const Eigen::VectorXd& h, const Eigen::VectorXd& f,
                            const FlowParameters& params, const Grid& grid);

/// Right-hand side of the weighted-residual flux equation at the faces,
///   (h^3/3)(2 - 2 h_x cot + h_xxx/Ca) + Re (18 q^2 h_x/35 - 34 h q q_x/35 + h q f/5).
Eigen::VectorXd wr_flux_rhs(const Eigen::VectorXd& h, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& f, const FlowParameters& params,
                            const Grid& grid);

/// q_t implied by the weighted-residual equation, 5 (rhs - q) / (2 Re h^2).
Eigen::VectorXd wr_flux_rate(const Eigen::VectorXd& h, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& f, const FlowParameters& params,
                             const Grid& grid);

/// Face flux 2 h^3 / 3 of the flat film with the local height.
Eigen::VectorXd local_nusselt_flux(const Eigen::VectorXd& h, const Grid& grid);

/// Node divergence (Q[j] - Q[j-1]) / dx of a face field.
Eigen::VectorXd face_divergence(const Eigen::VectorXd& q, const Grid& grid);

}  // namespace filmctl
