#include "vemns/geometry.hpp"

#include <algorithm>

namespace vemns {

double polygon_area(const std::vector<Vec2>& loop) {
  const size_t n = loop.size();
  double twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(const std::vector<Vec2>& loop) {
  const size_t n = loop.size();
  double cx = 0.0, cy = 0.0, twice = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    const double w = a.x * b.y - b.x * a.y;
    twice += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  if (twice == 0.0) throw std::invalid_argument("degenerate polygon");
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double polygon_diameter(const std::vector<Vec2>& loop) {
  double d2 = 0.0;
  for (size_t i = 0; i < loop.size(); ++i)
    for (size_t j = i + 1; j < loop.size(); ++j)
      d2 = std::max(d2, (loop[i] - loop[j]).squaredNorm());
  return std::sqrt(d2);
}

namespace {
bool on_grid(double v, double edge) {
  const double r = v / edge;
  return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, std::abs(r));
}
}  // namespace

void validate(const RectangleGeometry& g) {
  if (!(g.edge > 0.0)) throw std::invalid_argument("rectangle: edge must be positive");
  if (!(g.x1 > g.x0 && g.y1 > g.y0)) throw std::invalid_argument("rectangle: empty extent");
  if (!on_grid(g.x1 - g.x0, g.edge) || !on_grid(g.y1 - g.y0, g.edge))
    throw std::invalid_argument("rectangle: extents must be multiples of the initial edge");
}

void validate(const ChannelGeometry& g) {
  if (!(g.side > 0.0)) throw std::invalid_argument("channel: obstacle side must be positive");
  const double e = g.edge();
  for (double v : {g.height, g.upstream, g.downstream, g.cx, g.cy, g.side})
    if (!on_grid(v, e))
      throw std::invalid_argument("channel: all extents must sit on the initial grid (side/2)");
  if (!(g.cy - g.side / 2 > -g.height / 2 && g.cy + g.side / 2 < g.height / 2))
    throw std::invalid_argument("channel: obstacle must be strictly inside the channel");
  if (!(g.upstream > g.side && g.downstream > g.side))
    throw std::invalid_argument("channel: obstacle must be strictly between inflow and outflow");
}

}  // namespace vemns
