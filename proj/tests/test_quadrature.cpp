#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "vemns/quadrature.hpp"

using namespace vemns;

TEST_CASE("gauss-legendre on [0,1] hits analytic moments") {
  for (int n = 1; n <= 12; ++n) {
    const SegmentRule r = gauss_legendre(n);
    REQUIRE(r.t.size() == static_cast<size_t>(n));
    double wsum = 0.0;
    for (double w : r.w) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += r.w[q] * std::pow(r.t[q], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("segment rule integrates a cubic along a slanted segment") {
  const Vec2 a{0.25, -1.0}, b{1.75, 0.5};
  const auto rule = segment_quadrature(a, b, 3);
  // f(x,y) = x^3 - 2 x y + y^2 along the segment, reduced by hand to a
  // polynomial in t and integrated exactly:
  //   x = 1/4 + 3t/2, y = -1 + 3t/2, |b-a| = 3/sqrt(2) * ... = sqrt(4.5)
  oracle::Poly2 f = oracle::Poly2::mono(3, 0) - oracle::Poly2::mono(1, 1) * 2.0 +
                    oracle::Poly2::mono(0, 2);
  double got = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q)
    got += rule.weights[q] * f.eval(rule.points[q]);
  // dense 1d reference with a very fine midpoint rule
  double ref = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double t = (i + 0.5) / N;
    ref += f.eval(a + (b - a) * t);
  }
  ref *= (b - a).norm() / N;
  CHECK(got == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("triangle rule reproduces exact monomial integrals") {
  const Vec2 a{0, 0}, b{1, 0}, c{0, 1};
  // int_T x^p y^q = p! q! / (p+q+2)!
  auto fact = [](int n) { double r = 1; for (int i = 2; i <= n; ++i) r *= i; return r; };
  for (int deg = 0; deg <= 8; ++deg) {
    const auto rule = triangle_quadrature(a, b, c, deg);
    for (int p = 0; p + 0 <= deg; ++p)
      for (int q = 0; p + q <= deg; ++q) {
        double s = 0.0;
        for (size_t i = 0; i < rule.points.size(); ++i)
          s += rule.weights[i] * std::pow(rule.points[i].x, p) * std::pow(rule.points[i].y, q);
        const double exact = fact(p) * fact(q) / fact(p + q + 2);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
      }
  }
}

TEST_CASE("triangle rule on a shifted triangle matches the contour oracle") {
  const Vec2 a{-0.3, 0.7}, b{1.1, 0.9}, c{0.2, 2.0};
  const std::vector<Vec2> tri{a, b, c};
  const auto rule = triangle_quadrature(a, b, c, 6);
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) {
      double s = 0.0;
      for (size_t i = 0; i < rule.points.size(); ++i)
        s += rule.weights[i] * std::pow(rule.points[i].x, p) * std::pow(rule.points[i].y, q);
      CHECK(s == doctest::Approx(oracle::mono_integral(tri, p, q)).epsilon(1e-11));
    }
}

TEST_CASE("polygon rule is exact on squares and hanging-node polygons") {
  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  // square with one hanging node per side, as produced by 2:1 meshes
  const std::vector<Vec2> hang{{0, 0}, {0.5, 0}, {1, 0}, {1, 0.5},
                               {1, 1}, {0.5, 1}, {0, 1}, {0, 0.5}};
  for (const auto& loop : {square, hang}) {
    for (int deg = 0; deg <= 10; deg += 2) {
      const auto rule = polygon_quadrature(loop, deg);
      double area = 0.0;
      for (double w : rule.weights) area += w;
      CHECK(area == doctest::Approx(1.0).epsilon(1e-13));
      for (int p = 0; p <= deg; ++p)
        for (int q = 0; p + q <= deg; ++q) {
          double s = 0.0;
          for (size_t i = 0; i < rule.points.size(); ++i)
            s += rule.weights[i] * std::pow(rule.points[i].x, p) *
                 std::pow(rule.points[i].y, q);
          CHECK(s == doctest::Approx(1.0 / ((p + 1) * (q + 1))).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("polygon rule on random convex polygons vs contour oracle") {
  std::mt19937 gen(20240915);
  std::uniform_real_distribution<double> jitter(-0.12, 0.12);
  for (int trial = 0; trial < 20; ++trial) {
    // convex-ish polygon: perturbed points on a circle
    const int nv = 3 + trial % 6;
    std::vector<Vec2> loop;
    for (int i = 0; i < nv; ++i) {
      const double th = 2.0 * M_PI * i / nv;
      const double r = 1.0 + jitter(gen);
      loop.push_back({0.3 + r * std::cos(th), -0.2 + r * std::sin(th)});
    }
    const auto rule = polygon_quadrature(loop, 8);
    for (int p = 0; p <= 8; p += 3)
      for (int q = 0; p + q <= 8; q += 2) {
        double s = 0.0;
        for (size_t i = 0; i < rule.points.size(); ++i)
          s += rule.weights[i] * std::pow(rule.points[i].x, p) *
               std::pow(rule.points[i].y, q);
        const double ref = oracle::mono_integral(loop, p, q);
        CHECK(s == doctest::Approx(ref).epsilon(1e-11));
      }
  }
}
