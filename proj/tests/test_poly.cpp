#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "vemns/poly.hpp"

using namespace vemns;

TEST_CASE("index <-> exponent bookkeeping is graded lexicographic") {
  CHECK(n_monomials(0) == 1);
  CHECK(n_monomials(1) == 3);
  CHECK(n_monomials(2) == 6);
  CHECK(n_monomials(3) == 10);
  const auto& e = monomial_exponents(3);
  REQUIRE(e.size() >= 10);  // shared table, graded-lex prefix per degree
  // degree blocks: 1, x, y, x2, xy, y2, x3, x2y, xy2, y3
  const int want[10][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                           {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  for (int i = 0; i < 10; ++i) {
    CHECK(e[i].a == want[i][0]);
    CHECK(e[i].b == want[i][1]);
    CHECK(monomial_index(e[i].a, e[i].b) == i);
  }
}

TEST_CASE("scaled evaluation matches direct powers") {
  const ScaledBasis fr{{0.4, -1.3}, 0.75};
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int t = 0; t < 25; ++t) {
    const Vec2 p{d(gen), d(gen)};
    const Eigen::VectorXd v = fr.eval(4, p);
    const auto& e = monomial_exponents(4);
    REQUIRE(v.size() == 15);
    for (int i = 0; i < 15; ++i) {
      const double want = std::pow((p.x - fr.center.x) / fr.h, e[i].a) *
                          std::pow((p.y - fr.center.y) / fr.h, e[i].b);
      CHECK(v[i] == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("derivative maps agree with the reference polynomial algebra") {
  const ScaledBasis fr{{-0.2, 0.5}, 1.25};
  std::mt19937 gen(1234);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int deg = 3;
  Eigen::VectorXd coef(n_monomials(deg));
  for (int i = 0; i < coef.size(); ++i) coef[i] = d(gen);

  // reference polynomial in global coordinates
  oracle::Poly2 ref;
  const auto& e = monomial_exponents(deg);
  for (int i = 0; i < coef.size(); ++i)
    ref = ref + oracle::scaled_mono(fr.center, fr.h, e[i].a, e[i].b) * coef[i];

  const Eigen::VectorXd cx = fr.dx(coef);
  const Eigen::VectorXd cy = fr.dy(coef);
  const Eigen::VectorXd cl = fr.laplacian(coef);
  REQUIRE(cx.size() == n_monomials(deg - 1));
  REQUIRE(cl.size() == n_monomials(deg - 2));
  for (int t = 0; t < 10; ++t) {
    const Vec2 p{d(gen), d(gen)};
    CHECK(fr.value(cx, p) == doctest::Approx(ref.dx().eval(p)).epsilon(1e-12));
    CHECK(fr.value(cy, p) == doctest::Approx(ref.dy().eval(p)).epsilon(1e-12));
    CHECK(fr.value(cl, p) ==
          doctest::Approx((ref.dx().dx() + ref.dy().dy()).eval(p)).epsilon(1e-11));
  }
}

TEST_CASE("coefficient product equals pointwise product") {
  const ScaledBasis fr{{0.1, 0.2}, 0.5};
  std::mt19937 gen(999);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd a(n_monomials(2)), b(n_monomials(1));
  for (int i = 0; i < a.size(); ++i) a[i] = d(gen);
  for (int i = 0; i < b.size(); ++i) b[i] = d(gen);
  const Eigen::VectorXd ab = ScaledBasis::product(a, b);
  REQUIRE(ab.size() == n_monomials(3));
  for (int t = 0; t < 10; ++t) {
    const Vec2 p{d(gen), d(gen)};
    const double va = fr.value(a, p);
    const double vb = fr.value(b, p);
    CHECK(fr.value(ab, p) == doctest::Approx(va * vb).epsilon(1e-12));
  }
}

TEST_CASE("degree recovery from coefficient counts") {
  CHECK(poly_degree_of_size(1) == 0);
  CHECK(poly_degree_of_size(3) == 1);
  CHECK(poly_degree_of_size(6) == 2);
  CHECK(poly_degree_of_size(10) == 3);
}
