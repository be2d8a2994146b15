#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vemns/postprocess.hpp"
#include "vemns/solver.hpp"

using namespace vemns;

namespace {

struct Setup {
  QuadTreeMesh mesh;
  std::vector<ElementKernel> kernels;
  DofTable dofs;
};

Setup prepare(const ProblemSpec& prob, bool hang = false) {
  Setup s{build_initial_mesh(prob.geometry), {}, {}};
  if (hang) s.mesh = refine(s.mesh, {0});
  s.kernels = build_kernels(s.mesh);
  s.dofs = build_dof_table(s.mesh, prob);
  return s;
}

}  // namespace

TEST_CASE("stokes solve reproduces a quadratic solenoidal field exactly") {
  // quadratic harmonic divergence-free velocity with a linear pressure lies in
  // the discrete space, so the solve must return it to solver precision
  RectangleGeometry rect;
  rect.edge = 0.25;  // 4x4 grid
  ProblemSpec prob;
  prob.name = "quadratic";
  prob.nu = 0.7;
  prob.geometry = rect;
  auto u = [](const Vec2& p) { return Vec2{3.0 * (p.x * p.x - p.y * p.y), -6.0 * p.x * p.y}; };
  auto pr = [](const Vec2& p) { return -2.0 * p.x + p.y; };
  prob.dirichlet = u;
  // velocity is harmonic, so the momentum balance reduces to -grad p = f
  prob.force = [](const Vec2&) { return Vec2{2.0, -1.0}; };

  for (bool hang : {false, true}) {
    CAPTURE(hang);
    Setup s = prepare(prob, hang);
    const Solution sol = solve_stokes(s.mesh, s.kernels, s.dofs, prob);

    double vdev = 0.0;
    for (size_t i = 0; i < s.mesh.n_vertices(); ++i) {
      const Vec2 val = u(s.mesh.vertices[i]);
      vdev = std::max(vdev, std::abs(sol.velocity[s.dofs.vertex_dof(static_cast<int>(i), 0)] - val.x));
      vdev = std::max(vdev, std::abs(sol.velocity[s.dofs.vertex_dof(static_cast<int>(i), 1)] - val.y));
    }
    for (size_t e = 0; e < s.mesh.n_edges(); ++e) {
      const Vec2 val = u(s.mesh.edge_midpoint(static_cast<int>(e)));
      vdev = std::max(vdev, std::abs(sol.velocity[s.dofs.edge_dof(static_cast<int>(e), 0)] - val.x));
      vdev = std::max(vdev, std::abs(sol.velocity[s.dofs.edge_dof(static_cast<int>(e), 1)] - val.y));
    }
    CHECK(vdev < 1e-10);

    // pressure matches up to the mean gauge: slopes exact, offset constant
    double dev = 0.0;
    const double shift = sol.pressure[0] - pr(s.kernels[0].centroid());
    for (size_t k = 0; k < s.kernels.size(); ++k) {
      const ElementKernel& K = s.kernels[k];
      dev = std::max(dev, std::abs(sol.pressure[3 * k] - pr(K.centroid()) - shift));
      dev = std::max(dev, std::abs(sol.pressure[3 * k + 1] + 2.0 * K.h()));
      dev = std::max(dev, std::abs(sol.pressure[3 * k + 2] - 1.0 * K.h()));
    }
    CHECK(dev < 1e-10);
  }
}

TEST_CASE("newton lands on the polynomial manufactured solution") {
  // on uniform square grids the force-free polynomial case is captured
  // exactly: the projected-gradient error sits at roundoff (this is the
  // pressure-robust benchmark; hanging-node polygons trade it for an
  // ordinary consistency error)
  RectangleGeometry rect;
  rect.edge = 0.25;
  ProblemSpec prob = manufactured_polynomial(1.0, rect);
  Setup s = prepare(prob);
  const Solution sol = solve_steady(s.mesh, s.kernels, s.dofs, prob);
  CHECK(sol.converged);
  CHECK(sol.newton_iters <= 3);
  CHECK(sol.increments.size() == static_cast<size_t>(sol.newton_iters));
  CHECK(velocity_error(s.mesh, s.kernels, s.dofs, prob, sol) < 1e-10);

  const double div = divergence_l2_norm(s.kernels, s.dofs, s.mesh, sol.velocity);
  CHECK(div < 1e-10 * (1.0 + sol.velocity.norm()));
}

TEST_CASE("newton contracts and records its increment history") {
  ProblemSpec prob = manufactured_exponential(1.0);
  Setup s = prepare(prob);
  NewtonOptions opts;
  const Solution sol = solve_steady(s.mesh, s.kernels, s.dofs, prob, opts);
  CHECK(sol.converged);
  CHECK(sol.increments.size() == static_cast<size_t>(sol.newton_iters));
  REQUIRE(sol.newton_iters >= 2);
  // quadratic contraction: each step beats the previous by a wide margin
  for (size_t i = 1; i < sol.increments.size(); ++i)
    CHECK(sol.increments[i] < 0.1 * sol.increments[i - 1]);
  CHECK(sol.increments.back() < std::max(opts.tol, 1e-10 * (1.0 + sol.velocity.norm())));
}

TEST_CASE("a tolerance below working precision still terminates as converged") {
  ProblemSpec prob = manufactured_polynomial(40.0);
  Setup s = prepare(prob);
  NewtonOptions opts;
  opts.tol = 1e-16;  // unreachable for the direct solver
  const Solution sol = solve_steady(s.mesh, s.kernels, s.dofs, prob, opts);
  CHECK(sol.converged);
  CHECK(sol.newton_iters < opts.max_iter);  // stopped by the precision floor, not the cap
}

TEST_CASE("skew and plain convective forms agree on a resolved flow") {
  ProblemSpec prob = manufactured_exponential(10.0);
  Setup s = prepare(prob, true);
  NewtonOptions plain, skew;
  skew.skew = true;
  const Solution a = solve_steady(s.mesh, s.kernels, s.dofs, prob, plain);
  const Solution b = solve_steady(s.mesh, s.kernels, s.dofs, prob, skew);
  CHECK(a.converged);
  CHECK(b.converged);
  for (const Solution* sol : {&a, &b}) {
    const double div = divergence_l2_norm(s.kernels, s.dofs, s.mesh, sol->velocity);
    CHECK(div < 1e-10 * (1.0 + sol->velocity.norm()));
  }
  // both are O(h^2) accurate discretizations of the same flow
  const double scale = a.velocity.norm();
  CHECK((a.velocity - b.velocity).norm() < 0.05 * scale);
}
