#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vemns {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double squaredNorm() const { return x * x + y * y; }
  // rotate by -90 degrees: maps a CCW edge tangent to the outward normal
  Vec2 perp() const { return {y, -x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Simple polygon given as a CCW vertex loop. Collinear consecutive vertices
// are allowed (hanging nodes sit on straight sides).
double polygon_area(const std::vector<Vec2>& loop);
Vec2 polygon_centroid(const std::vector<Vec2>& loop);
double polygon_diameter(const std::vector<Vec2>& loop);

// Axis-aligned rectangle domain for the manufactured cases.
struct RectangleGeometry {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double edge = 0.5;  // initial square size; extents must be multiples of it
};

// Channel with a square obstacle. The domain is
// [cx - upstream, cx + downstream] x [-height/2, height/2] minus the square
// of side `side` centered at (cx, cy). All extents must sit on the grid of
// initial squares (edge = side/2).
struct ChannelGeometry {
  double height = 8.0;
  double side = 1.0;       // obstacle side D; initial square edge is D/2
  double cx = 0.5, cy = 0.0;
  double upstream = 12.0;  // distance from obstacle center to inflow
  double downstream = 28.0;

  double edge() const { return side / 2.0; }
  double xmin() const { return cx - upstream; }
  double xmax() const { return cx + downstream; }
  double rear_face_x() const { return cx + side / 2.0; }
};

void validate(const RectangleGeometry& g);
void validate(const ChannelGeometry& g);

}  // namespace vemns
