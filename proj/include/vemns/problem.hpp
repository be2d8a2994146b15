#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "vemns/mesh.hpp"

namespace vemns {

// Steady Navier-Stokes data: -nu*lap(u) + (grad u)u - grad p = f, div u = 0,
// u = g on the Dirichlet part, (nu*grad(u) + p*I)n = 0 on the Neumann part.
struct ProblemSpec {
  std::string name;
  double nu = 1.0;
  GeometrySpec geometry;
  std::function<Vec2(const Vec2&)> force;      // null -> zero
  std::function<Vec2(const Vec2&)> dirichlet;  // null -> zero

  bool has_exact = false;
  std::function<Vec2(const Vec2&)> exact_velocity;
  std::function<Eigen::Matrix2d(const Vec2&)> exact_velocity_gradient;
  std::function<double(const Vec2&)> exact_pressure;

  double reynolds() const { return 1.0 / nu; }
};

// Default domain for the manufactured cases when none is supplied:
// [2, 26] x [-4, 4] at initial edge 1. Wide enough in x that the exponential
// field sweeps two decades of amplitude (which is what puts the coarse-mesh
// estimator in the convection-dominated ordering), yet tame enough that
// Newton contracts within a few steps on the coarsest mesh.
RectangleGeometry default_test_rectangle();

// Quadratic velocity / quartic pressure field with zero body force.

ProblemSpec manufactured_polynomial(double re, const RectangleGeometry& geo = {});
// Exponential-trigonometric harmonic velocity field.
ProblemSpec manufactured_exponential(double re, const RectangleGeometry& geo = {});
// Channel with square obstacle, parabolic inflow of unit peak velocity.
ProblemSpec channel_flow(double re, const ChannelGeometry& geo = {});

// by CLI name: "test1", "test2", "cylinder"
ProblemSpec make_case(const std::string& name, double re, const GeometrySpec* geo);

}  // namespace vemns
