#pragma once

#include <Eigen/Dense>
#include <functional>

#include "vemns/poly.hpp"
#include "vemns/quadrature.hpp"

namespace vemns {

// Local operators for one polygonal element of the order-2 divergence-free
// velocity space (dim 4n+2) and its P1 pressure.
//
// Local velocity dof layout (n = vertices of the CCW loop):
//   2*i + c            component c at vertex i
//   2*n + 2*j + c      component c at the midpoint of side j (v_j -> v_{j+1})
//   4*n + c            (h/|E|) * int_E div(v) * m_{1+c},  m_1 = xi, m_2 = eta
//
// Polynomial coefficient layouts (scaled monomials, frame = centroid/diameter):
//   vector fields in [P2]^2 : 12 = x-component (6) then y-component (6)
//   tensors in [P1]^{2x2}   : 12 = (2*row + col)*3 + monomial, row-major
struct ElementKernel {
  std::vector<Vec2> loop;
  int n = 0;
  int ndof = 0;
  ScaledBasis frame;
  double area = 0.0;

  QuadratureRule quad;       // bulk rule, exactness 6 by default
  Eigen::MatrixXd mass3;     // 10x10 scalar monomial mass up to degree 3

  Eigen::MatrixXd proj_nabla;  // 12 x ndof   energy projection onto [P2]^2
  Eigen::MatrixXd proj_l2;     // 12 x ndof   L2 projection onto [P2]^2
  Eigen::MatrixXd proj_grad;   // 12 x ndof   L2 projection of the gradient
  Eigen::MatrixXd dofmat;      // ndof x 12   dofs of the [P2]^2 basis fields
  Eigen::MatrixXd a_unit;      // ndof x ndof local momentum form at nu = 1
  Eigen::MatrixXd b_loc;       // 3 x ndof    int_E div(v) m_alpha
  Eigen::MatrixXd div_map;     // 3 x ndof    coefficients of div(v) in P1

  double h() const { return frame.h; }
  Vec2 centroid() const { return frame.center; }
  Vec2 side_midpoint(int j) const {
    return (loop[j] + loop[(j + 1) % n]) * 0.5;
  }
};

ElementKernel build_element_kernel(const std::vector<Vec2>& loop, int quad_degree = 6);

// d/du of the convective Newton operator at state w plus the matching rhs
// correction: for trial/test dof vectors the linearized convective term is
// v^T * jac * u and the Newton right-hand side gains v^T * rhs.
struct ConvectivePair {
  Eigen::MatrixXd jac;
  Eigen::VectorXd rhs;
};
ConvectivePair convective_newton(const ElementKernel& K, const Eigen::VectorXd& w,
                                 bool skew_form);

// int_E f . (L2-projection of the test function)
Eigen::VectorXd local_load(const ElementKernel& K,
                           const std::function<Vec2(const Vec2&)>& f,
                           int quad_degree = 8);

// dof-vector seminorm of the non-polynomial part: || u - dofs(proj_nabla u) ||_2
double stab_seminorm(const ElementKernel& K, const Eigen::VectorXd& u);

// convenience evaluations of coefficient vectors in the element frame
Vec2 eval_vec2(const ScaledBasis& frame, const Eigen::VectorXd& c12, const Vec2& p);
Eigen::Matrix2d eval_tensor(const ScaledBasis& frame, const Eigen::VectorXd& c12,
                            const Vec2& p);

// dof vector of an analytic velocity field (divergence given analytically)
Eigen::VectorXd interpolate_velocity(const ElementKernel& K,
                                     const std::function<Vec2(const Vec2&)>& u,
                                     const std::function<double(const Vec2&)>& div_u,
                                     int quad_degree = 8);

}  // namespace vemns
