#include "vemns/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace vemns {

RectangleGeometry default_test_rectangle() {
  RectangleGeometry r;
  r.x0 = 2.0;
  r.x1 = 26.0;
  r.y0 = -4.0;
  r.y1 = 4.0;
  r.edge = 1.0;
  return r;
}

ProblemSpec manufactured_polynomial(double re, const RectangleGeometry& geo) {
  if (!(re > 0)) throw std::invalid_argument("re must be positive");
  ProblemSpec p;
  p.name = "test1";
  p.nu = 1.0 / re;
  p.geometry = geo;
  const double nu = p.nu;
  // divergence-free, harmonic: the body force vanishes identically
  p.exact_velocity = [nu](const Vec2& x) {
    return Vec2{3.0 * nu * (x.x * x.x - x.y * x.y), -6.0 * nu * x.x * x.y};
  };
  p.exact_velocity_gradient = [nu](const Vec2& x) {
    Eigen::Matrix2d g;
    g << 6.0 * nu * x.x, -6.0 * nu * x.y, -6.0 * nu * x.y, -6.0 * nu * x.x;
    return g;
  };
  p.exact_pressure = [nu](const Vec2& x) {
    const double r2 = x.x * x.x + x.y * x.y;
    return nu * nu * 4.5 * r2 * r2;  // defined up to the mean-zero constant
  };
  p.has_exact = true;
  p.dirichlet = p.exact_velocity;
  p.force = nullptr;  // (grad u)u balances grad p exactly
  return p;
}

ProblemSpec manufactured_exponential(double re, const RectangleGeometry& geo) {
  if (!(re > 0)) throw std::invalid_argument("re must be positive");
  ProblemSpec p;
  p.name = "test2";
  p.nu = 1.0 / re;
  p.geometry = geo;
  auto ex = [](const Vec2& x) { return std::exp(-(x.x - 12.0) / 6.0); };
  p.exact_velocity = [ex](const Vec2& x) {
    const double E = ex(x);
    return Vec2{E * std::sin(x.y / 6.0), -E * std::cos(x.y / 6.0)};
  };
  p.exact_velocity_gradient = [ex](const Vec2& x) {
    const double E = ex(x), s = std::sin(x.y / 6.0), c = std::cos(x.y / 6.0);
    Eigen::Matrix2d g;
    g << -E * s / 6.0, E * c / 6.0, E * c / 6.0, E * s / 6.0;
    return g;
  };
  p.exact_pressure = [ex](const Vec2& x) { return ex(x) * std::sin(x.y / 6.0); };
  p.has_exact = true;
  p.dirichlet = p.exact_velocity;
  // velocity is harmonic, so f = (grad u)u - grad p independent of nu
  p.force = [ex](const Vec2& x) {
    const double E = ex(x), s = std::sin(x.y / 6.0), c = std::cos(x.y / 6.0);
    return Vec2{(E * s - E * E) / 6.0, -E * c / 6.0};
  };
  return p;
}

ProblemSpec channel_flow(double re, const ChannelGeometry& geo) {
  if (!(re > 0)) throw std::invalid_argument("re must be positive");
  validate(geo);
  ProblemSpec p;
  p.name = "cylinder";
  p.nu = 1.0 / re;
  p.geometry = geo;
  const double xin = geo.xmin();
  const double half = geo.height / 2.0;
  p.dirichlet = [xin, half](const Vec2& x) {
    if (std::abs(x.x - xin) < 1e-9 * std::max(1.0, std::abs(xin))) {
      const double r = x.y / half;
      return Vec2{1.0 - r * r, 0.0};  // peak velocity 1 on the axis
    }
    return Vec2{0.0, 0.0};  // walls and obstacle
  };
  p.force = nullptr;
  return p;
}

ProblemSpec make_case(const std::string& name, double re, const GeometrySpec* geo) {
  if (name == "test1" || name == "test2") {
    RectangleGeometry r = default_test_rectangle();
    if (geo) {
      if (!std::holds_alternative<RectangleGeometry>(*geo))
        throw std::invalid_argument(name + " requires a rectangle geometry");
      r = std::get<RectangleGeometry>(*geo);
    }
    return name == "test1" ? manufactured_polynomial(re, r) : manufactured_exponential(re, r);
  }
  if (name == "cylinder") {
    ChannelGeometry c;
    if (geo) {
      if (!std::holds_alternative<ChannelGeometry>(*geo))
        throw std::invalid_argument("cylinder requires a channel geometry");
      c = std::get<ChannelGeometry>(*geo);
    }
    return channel_flow(re, c);
  }
  throw std::invalid_argument("unknown case '" + name + "' (test1|test2|cylinder)");
}

}  // namespace vemns
