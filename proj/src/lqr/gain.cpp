#include <cmath>

#include "filmctl/diff_ops.hpp"
#include "filmctl/errors.hpp"
#include "filmctl/linalg.hpp"
#include "filmctl/lqr.hpp"

namespace filmctl {

CostWeights cost_weights(double beta, const Grid& grid, int actuators, int fields) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  if (actuators < 1 || fields < 1) throw InvalidArgument("cost weights need M >= 1");
  const int n = fields * grid.size();
  CostWeights w;
  w.beta = beta;
  w.u = Eigen::MatrixXd::Identity(n, n) * (beta * grid.aspect() / grid.size());
  w.v = Eigen::MatrixXd::Identity(actuators, actuators) * (1.0 - beta);
  return w;
}

GainMatrix gain(const Eigen::MatrixXd& p, const LinearSystem& system, const CostWeights& weights,
                const std::string& solver) {
  if (p.rows() != system.state_dim() || p.cols() != system.state_dim()) {
    throw InvalidArgument("P does not match the system dimension");
  }
  GainMatrix g;
  g.k = -weights.v.ldlt().solve(system.actuation.transpose() * p);
  if (!g.k.allFinite()) throw NumericalFailure("gain has non-finite entries");
  g.meta.model = system.model;
  g.meta.params = system.params;
  g.meta.beta = weights.beta;
  g.meta.actuators = static_cast<int>(system.actuation.cols());
  g.meta.width = system.actuator_width;
  g.meta.grid_points = system.grid_points;
  g.meta.solver = solver;
  return g;
}

GainSynthesis synthesize_gain(const LinearSystem& system, const CostWeights& weights,
                              std::optional<CareMethod> method) {
  GainSynthesis out;
  out.care = solve_care(system, weights, method);
  out.gain = gain(out.care.p, system, weights, to_string(out.care.method));
  return out;
}

GainMatrix reduce_wr_gain(const GainMatrix& full) {
  const int n = full.meta.grid_points;
  if (full.meta.model != Model::WeightedResidual || full.meta.reduced || full.cols() != 2 * n) {
    throw InvalidArgument("reduce_wr_gain expects an unreduced weighted-residual gain");
  }
  const Grid grid(n, full.meta.params.aspect);
  const Eigen::MatrixXd average = build_staggered_ops(grid).average;
  GainMatrix reduced;
  reduced.meta = full.meta;
  reduced.meta.reduced = true;
  reduced.k = full.k.leftCols(n) + 2.0 * full.k.rightCols(n) * average;
  return reduced;
}

ClosedLoop closed_loop(const LinearSystem& system, const Eigen::MatrixXd& k) {
  const int dim = system.state_dim();
  if (k.rows() != system.actuation.cols()) throw InvalidArgument("gain rows != actuator count");
  ClosedLoop cl;
  if (k.cols() == dim) {
    cl.a = system.jacobian + system.actuation * k;
  } else if (system.model == Model::WeightedResidual && 2 * k.cols() == dim) {
    cl.a = system.jacobian;
    cl.a.leftCols(k.cols()) += system.actuation * k;
  } else {
    throw InvalidArgument("gain columns do not match the system state");
  }
  cl.eigenvalues = linalg::eigenvalues(cl.a);
  cl.spectral_abscissa = linalg::spectral_abscissa(cl.eigenvalues);
  return cl;
}

ClosedLoop closed_loop(const LinearSystem& system, const GainMatrix& gain) {
  return closed_loop(system, gain.k);
}

}  // namespace filmctl
