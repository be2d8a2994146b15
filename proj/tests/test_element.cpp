#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "element_oracle.hpp"
#include "vemns/element.hpp"

using namespace vemns;

namespace {

const std::vector<Vec2> kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const std::vector<Vec2> kHangTwo{{0, 0}, {1, 0}, {1, 0.5}, {1, 1}, {0.5, 1}, {0, 1}};
const std::vector<Vec2> kHangFour{{0, 0},   {0.5, 0}, {1, 0},   {1, 0.5},
                                  {1, 1},   {0.5, 1}, {0, 1},   {0, 0.5}};
const std::vector<Vec2> kShifted{{2.0, -1.0}, {2.75, -1.0}, {2.75, -0.25}, {2.0, -0.25}};

std::vector<std::vector<Vec2>> test_loops() {
  return {kSquare, kHangTwo, kHangFour, kShifted};
}

}  // namespace

TEST_CASE("projections reproduce polynomial velocity fields") {
  for (const auto& loop : test_loops()) {
    const ElementKernel K = build_element_kernel(loop);
    const Eigen::MatrixXd I12 = Eigen::MatrixXd::Identity(12, 12);
    CHECK((K.proj_nabla * K.dofmat - I12).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((K.proj_l2 * K.dofmat - I12).cwiseAbs().maxCoeff() < 1e-11);

    // gradient projection of a basis field: rows (2r+c) hold d_c m_al when r
    // is the populated component, zero otherwise
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(12, 12);
    for (int c = 0; c < 2; ++c)
      for (int al = 0; al < 6; ++al) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(6);
        e[al] = 1.0;
        const Eigen::VectorXd gx = K.frame.dx(e), gy = K.frame.dy(e);
        expected.block((2 * c + 0) * 3, 6 * c + al, 3, 1) = gx;
        expected.block((2 * c + 1) * 3, 6 * c + al, 3, 1) = gy;
      }
    CHECK((K.proj_grad * K.dofmat - expected).cwiseAbs().maxCoeff() < 1e-11);

    // stabilization vanishes on polynomial fields
    for (int beta = 0; beta < 12; ++beta)
      CHECK(stab_seminorm(K, K.dofmat.col(beta)) < 1e-11);
  }
}

TEST_CASE("interpolation reproduces polynomial dof vectors and divergences") {
  const ElementKernel K = build_element_kernel(kHangTwo);
  // u = (x^2 - 0.5 x y, x y + y^2), div u = (2x - 0.5y) + (x + 2y)
  auto u = [](const Vec2& p) {
    return Vec2{p.x * p.x - 0.5 * p.x * p.y, p.x * p.y + p.y * p.y};
  };
  auto div_u = [](const Vec2& p) { return 3.0 * p.x + 1.5 * p.y; };
  const Eigen::VectorXd dofs = interpolate_velocity(K, u, div_u);

  // same field assembled from the polynomial basis columns
  const Vec2 c = K.centroid();
  const double h = K.h();
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(12);
  // x^2 = (h m_xi + cx)^2, etc: expand each global monomial into the frame
  auto put = [&](int comp, int a, int b, double v) {
    // global x^a y^b into scaled monomials of the frame (a+b <= 2 here)
    for (int i = 0; i <= a; ++i)
      for (int j = 0; j <= b; ++j) {
        const double w = oracle::choose(a, i) * std::pow(c.x, a - i) *
                         oracle::choose(b, j) * std::pow(c.y, b - j) *
                         std::pow(h, i + j);
        coef[6 * comp + monomial_index(i, j)] += v * w;
      }
  };
  put(0, 2, 0, 1.0);
  put(0, 1, 1, -0.5);
  put(1, 1, 1, 1.0);
  put(1, 0, 2, 1.0);
  const Eigen::VectorXd ref = K.dofmat * coef;
  CHECK((dofs - ref).cwiseAbs().maxCoeff() < 1e-12);

  // divergence reconstruction matches the analytic divergence
  const Eigen::Vector3d dc = K.div_map * dofs;
  for (const Vec2& p : {Vec2{0.3, 0.4}, Vec2{0.9, 0.1}, c}) {
    double m[3];
    K.frame.eval(1, p, m);
    CHECK(dc[0] * m[0] + dc[1] * m[1] + dc[2] * m[2] ==
          doctest::Approx(div_u(p)).epsilon(1e-11));
  }
}

TEST_CASE("kernel operators agree with the first-principles recomputation") {
  std::mt19937 gen(424242);
  for (const auto& loop : test_loops()) {
    const ElementKernel K = build_element_kernel(loop);
    const double dev = oracle::verify_element_kernel(K, gen);
    CHECK(dev < 1e-10);
  }
}

TEST_CASE("skew jacobian is the exact derivative of the skew residual") {
  // finite-difference check of the Newton linearization on a hanging element
  const ElementKernel K = build_element_kernel(kHangFour);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd w(K.ndof);
  for (int i = 0; i < K.ndof; ++i) w[i] = d(gen);

  for (bool skew : {false, true}) {
    // residual r(w) = jac(w) w - rhs(w) equals the convective vector c(w;w,.)
    const auto at = [&](const Eigen::VectorXd& state) {
      const auto p = convective_newton(K, state, skew);
      return Eigen::VectorXd(p.jac * state - p.rhs);
    };
    const auto base = convective_newton(K, w, skew);
    const double eps = 1e-6;
    for (int k : {0, 3, K.ndof - 1}) {
      Eigen::VectorXd wp = w, wm = w;
      wp[k] += eps;
      wm[k] -= eps;
      const Eigen::VectorXd fd = (at(wp) - at(wm)) / (2 * eps);
      CHECK((fd - base.jac.col(k)).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}
