#pragma once

#include <vector>

#include "vemns/geometry.hpp"

namespace vemns {

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  size_t size() const { return points.size(); }
  double sum_weights() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

struct SegmentRule {
  std::vector<double> t;  // parameters in [0,1]
  std::vector<double> w;  // weights summing to 1
};

// Gauss-Legendre on [0,1], exact for polynomials of degree <= 2n-1.
SegmentRule gauss_legendre(int n);

// Rule on a segment [a,b], exact up to the requested polynomial degree.
QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int degree);

// Conical-product rule on a triangle, exact for total degree <= `degree`.
QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c,
                                   int degree);

// Centroid-fan rule on a star-shaped (here: convex) CCW polygon, exact for
// total degree <= `degree`. Weights sum to the polygon area.
QuadratureRule polygon_quadrature(const std::vector<Vec2>& loop, int degree);

}  // namespace vemns
