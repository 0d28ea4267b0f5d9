#include "filmctl/film_flux.hpp"

#include "filmctl/errors.hpp"

namespace filmctl {

FaceStencil face_stencil(const Eigen::VectorXd& h, const Eigen::VectorXd& f, const Grid& grid) {
  const int n = grid.size();
  if (h.size() != n || f.size() != n) throw InvalidArgument("field length != grid size");
  const double dx = grid.spacing();
  const double dx3 = dx * dx * dx;
  FaceStencil s;
  s.h.resize(n);
  s.hx.resize(n);
  s.hxxx.resize(n);
  s.f.resize(n);
  for (int j = 0; j < n; ++j) {
    const double hm = h[grid.wrap(j - 1)];
    const double h0 = h[j];
    const double h1 = h[grid.wrap(j + 1)];
    const double h2 = h[grid.wrap(j + 2)];
    s.h[j] = 0.5 * (h0 + h1);
    s.hx[j] = (h1 - h0) / dx;
    s.hxxx[j] = (h2 - 3.0 * h1 + 3.0 * h0 - hm) / dx3;
    s.f[j] = 0.5 * (f[j] + f[grid.wrap(j + 1)]);
  }
  return s;
}

Eigen::VectorXd benney_flux(const Eigen::VectorXd& h, const Eigen::VectorXd& f,
                            const FlowParameters& params, const Grid& grid) {
  const FaceStencil s = face_stencil(h, f, grid);
  const double re = params.reynolds;
  const double ca = params.capillary;
  const double cot = params.cot_theta();
  const Eigen::ArrayXd hf = s.h.array();
  const Eigen::ArrayXd h3 = hf.cube();
  return (h3 / 3.0 * (2.0 - 2.0 * cot * s.hx.array() + s.hxxx.array() / ca) +
          re * (8.0 * h3.square() * s.hx.array() / 15.0 - 2.0 * h3 * hf * s.f.array() / 3.0))
      .matrix();
}

Eigen::VectorXd wr_flux_rhs(const Eigen::VectorXd& h, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& f, const FlowParameters& params,
                            const Grid& grid) {
  const int n = grid.size();
  if (q.size() != n) throw InvalidArgument("flux length != grid size");
  const FaceStencil s = face_stencil(h, f, grid);
  const double re = params.reynolds;
  const double ca = params.capillary;
  const double cot = params.cot_theta();
  const double dx = grid.spacing();
  Eigen::VectorXd rhs(n);
  for (int j = 0; j < n; ++j) {
    const double hf = s.h[j];
    const double qj = q[j];
    const double qx = (q[grid.wrap(j + 1)] - q[grid.wrap(j - 1)]) / (2.0 * dx);
    rhs[j] = hf * hf * hf / 3.0 * (2.0 - 2.0 * cot * s.hx[j] + s.hxxx[j] / ca) +
             re * (18.0 * qj * qj * s.hx[j] / 35.0 - 34.0 * hf * qj * qx / 35.0 +
                   hf * qj * s.f[j] / 5.0);
  }
  return rhs;
}

Eigen::VectorXd wr_flux_rate(const Eigen::VectorXd& h, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& f, const FlowParameters& params,
                             const Grid& grid) {
  const Eigen::VectorXd rhs = wr_flux_rhs(h, q, f, params, grid);
  const FaceStencil s = face_stencil(h, f, grid);
  return (5.0 * (rhs - q).array() / (2.0 * params.reynolds * s.h.array().square())).matrix();
}

Eigen::VectorXd local_nusselt_flux(const Eigen::VectorXd& h, const Grid& grid) {
  const FaceStencil s = face_stencil(h, Eigen::VectorXd::Zero(h.size()), grid);
  return (2.0 * s.h.array().cube() / 3.0).matrix();
}

Eigen::VectorXd face_divergence(const Eigen::VectorXd& q, const Grid& grid) {
  const int n = grid.size();
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) out[j] = (q[j] - q[grid.wrap(j - 1)]) / grid.spacing();
  return out;
}

}  // namespace filmctl
