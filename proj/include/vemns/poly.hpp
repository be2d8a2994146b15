#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vemns/geometry.hpp"

namespace vemns {

// Scaled monomials m_(a,b)(x) = ((x-cx)/h)^a * ((y-cy)/h)^b in graded
// lexicographic order: (0,0); (1,0),(0,1); (2,0),(1,1),(0,2); ...
struct MonomialExp {
  int a, b;
};

inline constexpr int n_monomials(int deg) { return (deg + 1) * (deg + 2) / 2; }
inline constexpr int monomial_index(int a, int b) {
  const int d = a + b;
  return d * (d + 1) / 2 + b;
}
// shared graded-lex exponent table; the first n_monomials(deg) entries are
// exactly the monomials of degree <= deg (throws if deg exceeds the table)
const std::vector<MonomialExp>& monomial_exponents(int deg);

// Evaluation frame shared by all polynomials on one element.
struct ScaledBasis {
  Vec2 center;
  double h = 1.0;

  // values of all monomials up to `deg` at p
  void eval(int deg, const Vec2& p, double* out) const;
  Eigen::VectorXd eval(int deg, const Vec2& p) const;

  // coefficient maps between monomial vectors (same frame)
  // d/dx : P_deg -> P_{deg-1}
  Eigen::VectorXd dx(const Eigen::VectorXd& c) const;
  Eigen::VectorXd dy(const Eigen::VectorXd& c) const;
  // laplacian : P_deg -> P_{deg-2}
  Eigen::VectorXd laplacian(const Eigen::VectorXd& c) const;
  // product of two coefficient vectors
  static Eigen::VectorXd product(const Eigen::VectorXd& ca, const Eigen::VectorXd& cb);

  double value(const Eigen::VectorXd& c, const Vec2& p) const;
};

int poly_degree_of_size(int n);  // inverse of n_monomials, throws if not triangular

}  // namespace vemns
