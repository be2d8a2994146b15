#pragma once

#include "vemns/assembly.hpp"

namespace vemns {

struct NewtonOptions {
  double tol = 1e-9;    // l2 norm of the velocity dof increment
  int max_iter = 10;
  bool skew = false;    // skew-symmetrized convective linearization
  bool verbose = false;
};

struct Solution {
  Eigen::VectorXd velocity;  // full velocity dof vector incl. boundary data
  Eigen::VectorXd pressure;  // 3 scaled-monomial coefficients per element
  double multiplier = 0.0;   // pressure-gauge multiplier (fully Dirichlet flows)
  int newton_iters = 0;
  std::vector<double> increments;  // per-iteration velocity increment norms
  bool converged = true;
};

// linear Stokes solve (also the Newton initial guess)
Solution solve_stokes(const QuadTreeMesh& mesh,
                      const std::vector<ElementKernel>& kernels,
                      const DofTable& dofs, const ProblemSpec& prob);

// Newton iteration for the steady Navier-Stokes system, started from Stokes
Solution solve_steady(const QuadTreeMesh& mesh,
                      const std::vector<ElementKernel>& kernels,
                      const DofTable& dofs, const ProblemSpec& prob,
                      const NewtonOptions& opts = {});

// discrete pressure on element k
inline double eval_pressure(const ElementKernel& K, const Eigen::VectorXd& pressure,
                            int k, const Vec2& x) {
  double m[3];
  K.frame.eval(1, x, m);
  return pressure[3 * k] * m[0] + pressure[3 * k + 1] * m[1] + pressure[3 * k + 2] * m[2];
}

}  // namespace vemns
