#pragma once

#include <array>
#include <string>

#include "vemns/assembly.hpp"
#include "vemns/solver.hpp"

namespace vemns {

// Per-element residual indicators. Components follow the additive split
// eta_E^2 = eta_f^2 + eta_B^2 + eta_e^2 + eta_S^2 + eta_c1^2 + eta_c2^2 + eta_c3^2:
//   f   data oscillation        h_E ||f_h - f||
//   B   bulk momentum residual  h_E ||f_h + nu lap(PN u) + grad p - (PG u)(P0 u)||
//   e   edge jumps              sum over interior edges of h_e ||[nu grad(PN u) + p I]||^2
//   S   stabilization           nu * sigma_E
//   c1  convective projection   h_E ||(I - P0)[(PG u)(P0 u)]||
//   c2  convective stabilization sigma_E * ||P0 u||_Linf
//   c3  mixed stabilization     (sigma_E + ||grad(P0 u - PN u)||)(sigma_E + ||grad PN u||)
// where PN/P0/PG are the element projections and sigma_E the dof seminorm of
// the non-polynomial part. Interior edges contribute to both elements.
struct EstimatorBreakdown {
  Eigen::VectorXd eta_f, eta_B, eta_e, eta_S, eta_c1, eta_c2, eta_c3;
  Eigen::VectorXd sigma;   // sigma_E per element
  Eigen::VectorXd eta_sq;  // per-element total (sum of the seven squares)

  double total() const { return std::sqrt(eta_sq.sum()); }
  // global component magnitudes (sqrt of summed squares), order f,B,e,S,c1,c2,c3
  std::array<double, 7> components() const;
  static const char* component_name(int i);
};

EstimatorBreakdown estimate(const QuadTreeMesh& mesh,
                            const std::vector<ElementKernel>& kernels,
                            const DofTable& dofs, const ProblemSpec& prob,
                            const Solution& sol);

// bulk momentum indicator of one element given its local velocity dofs and
// pressure coefficients; `force` may be null (f = 0)
double bulk_indicator(const ElementKernel& K, const Eigen::VectorXd& u_loc,
                      const Eigen::Vector3d& p_loc, double nu,
                      const std::function<Vec2(const Vec2&)>& force);

// per-element rows (id, h, sigma, seven components, eta) plus a "total" row
std::string breakdown_csv(const QuadTreeMesh& mesh, const EstimatorBreakdown& b);

}  // namespace vemns
