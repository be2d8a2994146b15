#include "vemns/estimator.hpp"

#include <cmath>
#include <sstream>

#include "vemns/quadrature.hpp"

namespace vemns {

namespace {

// [P1]^{2x2} coefficients (layout (2*row+col)*3 + monomial) of the gradient
// of a [P2]^2 coefficient vector
Eigen::VectorXd grad_coeffs(const ScaledBasis& frame, const Eigen::VectorXd& c12) {
  Eigen::VectorXd g(12);
  for (int r = 0; r < 2; ++r) {
    const Eigen::VectorXd cr = c12.segment(6 * r, 6);
    g.segment((2 * r + 0) * 3, 3) = frame.dx(cr);
    g.segment((2 * r + 1) * 3, 3) = frame.dy(cr);
  }
  return g;
}

// ||grad v||_{0,E}^2 for a [P2]^2 coefficient vector via the P1 mass block
double grad_norm_sq(const ElementKernel& K, const Eigen::VectorXd& c12) {
  const Eigen::MatrixXd m1 = K.mass3.topLeftCorner(3, 3);
  const Eigen::VectorXd g = grad_coeffs(K.frame, c12);
  double s = 0.0;
  for (int b = 0; b < 4; ++b) {
    const Eigen::VectorXd gb = g.segment(3 * b, 3);
    s += gb.dot(m1 * gb);
  }
  return s;
}

// convective polynomial t = (PG u)(P0 u) in [P3]^2 coefficients (10 + 10)
Eigen::VectorXd convective_poly(const Eigen::VectorXd& pg, const Eigen::VectorXd& p0) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(20);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      t.segment(10 * r, 10) += ScaledBasis::product(pg.segment((2 * r + c) * 3, 3),
                                                    p0.segment(6 * c, 6));
  return t;
}

}  // namespace

double bulk_indicator(const ElementKernel& K, const Eigen::VectorXd& u_loc,
                      const Eigen::Vector3d& p_loc, double nu,
                      const std::function<Vec2(const Vec2&)>& force) {
  const double h = K.h();
  const Eigen::VectorXd pn = K.proj_nabla * u_loc;
  const Eigen::VectorXd t = convective_poly(K.proj_grad * u_loc, K.proj_l2 * u_loc);
  Eigen::VectorXd res = -t;
  for (int r = 0; r < 2; ++r) {
    const Eigen::VectorXd lap = K.frame.laplacian(pn.segment(6 * r, 6));
    res.segment(10 * r, lap.size()) += nu * lap;
    res[10 * r] += p_loc[1 + r] / h;  // gradient of the affine pressure
  }
  if (force) {
    const QuadratureRule rule = polygon_quadrature(K.loop, 8);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 2);
    for (size_t q = 0; q < rule.size(); ++q) {
      const Vec2 f = force(rule.points[q]);
      const Eigen::VectorXd m = K.frame.eval(2, rule.points[q]);
      rhs.col(0) += rule.weights[q] * f.x * m;
      rhs.col(1) += rule.weights[q] * f.y * m;
    }
    const Eigen::MatrixXd fh = K.mass3.topLeftCorner(6, 6).llt().solve(rhs);
    res.segment(0, 6) += fh.col(0);
    res.segment(10, 6) += fh.col(1);
  }
  double bulk = 0.0;
  for (int r = 0; r < 2; ++r) {
    const Eigen::VectorXd rr = res.segment(10 * r, 10);
    bulk += rr.dot(K.mass3 * rr);
  }
  return h * std::sqrt(std::max(0.0, bulk));
}

std::array<double, 7> EstimatorBreakdown::components() const {
  auto g = [](const Eigen::VectorXd& v) { return std::sqrt(v.squaredNorm()); };
  return {g(eta_f), g(eta_B), g(eta_e), g(eta_S), g(eta_c1), g(eta_c2), g(eta_c3)};
}

const char* EstimatorBreakdown::component_name(int i) {
  static const char* names[7] = {"eta_f", "eta_B", "eta_e", "eta_S",
                                 "eta_c1", "eta_c2", "eta_c3"};
  return names[i];
}

EstimatorBreakdown estimate(const QuadTreeMesh& mesh,
                            const std::vector<ElementKernel>& kernels,
                            const DofTable& dofs, const ProblemSpec& prob,
                            const Solution& sol) {
  const int nk = static_cast<int>(mesh.n_elements());
  const double nu = prob.nu;

  EstimatorBreakdown b;
  for (Eigen::VectorXd* v : {&b.eta_f, &b.eta_B, &b.eta_e, &b.eta_S, &b.eta_c1,
                             &b.eta_c2, &b.eta_c3, &b.sigma, &b.eta_sq})
    *v = Eigen::VectorXd::Zero(nk);

  // per-element projection coefficients, reused by the edge loop
  std::vector<Eigen::VectorXd> pn(nk), p0(nk), gradpn(nk);
  std::vector<Eigen::Vector3d> ploc(nk);

  for (int k = 0; k < nk; ++k) {
    const ElementKernel& K = kernels[k];
    const double h = K.h();
    Eigen::VectorXd ul(K.ndof);
    const std::vector<int> gd = dofs.element_dofs(mesh, k);
    for (int i = 0; i < K.ndof; ++i) ul[i] = sol.velocity[gd[i]];

    pn[k] = K.proj_nabla * ul;
    p0[k] = K.proj_l2 * ul;
    const Eigen::VectorXd pg = K.proj_grad * ul;
    gradpn[k] = grad_coeffs(K.frame, pn[k]);
    ploc[k] = sol.pressure.segment(3 * k, 3);

    const double sg = stab_seminorm(K, ul);
    b.sigma[k] = sg;
    b.eta_S[k] = nu * sg;

    b.eta_B[k] = bulk_indicator(K, ul, ploc[k], nu, prob.force);

    if (prob.force) {
      // data oscillation h ||f_h - f|| on the load rule (exactness 8)
      const QuadratureRule rule = polygon_quadrature(K.loop, 8);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 2);
      for (size_t q = 0; q < rule.size(); ++q) {
        const Vec2 f = prob.force(rule.points[q]);
        const Eigen::VectorXd m = K.frame.eval(2, rule.points[q]);
        rhs.col(0) += rule.weights[q] * f.x * m;
        rhs.col(1) += rule.weights[q] * f.y * m;
      }
      const Eigen::MatrixXd fh =
          K.mass3.topLeftCorner(6, 6).llt().solve(rhs);  // 6 x 2
      double osc = 0.0;
      for (size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd m = K.frame.eval(2, rule.points[q]);
        const Vec2 f = prob.force(rule.points[q]);
        const double dx = fh.col(0).dot(m) - f.x;
        const double dy = fh.col(1).dot(m) - f.y;
        osc += rule.weights[q] * (dx * dx + dy * dy);
      }
      b.eta_f[k] = h * std::sqrt(std::max(0.0, osc));
    }

    // convective projection defect: (I - P0) t, still a cubic
    const Eigen::VectorXd t = convective_poly(pg, p0[k]);
    Eigen::VectorXd d = t;
    const Eigen::MatrixXd m23 = K.mass3.topRows(6);
    const auto m22 = K.mass3.topLeftCorner(6, 6);
    for (int r = 0; r < 2; ++r)
      d.segment(10 * r, 6) -= m22.llt().solve(m23 * t.segment(10 * r, 10));
    double c1 = 0.0;
    for (int r = 0; r < 2; ++r) {
      const Eigen::VectorXd dr = d.segment(10 * r, 10);
      c1 += dr.dot(K.mass3 * dr);
    }
    b.eta_c1[k] = h * std::sqrt(std::max(0.0, c1));

    // sup norm of P0 u over a deterministic dense sample set
    double umax = 0.0;
    auto sample = [&](const Vec2& p) {
      umax = std::max(umax, eval_vec2(K.frame, p0[k], p).norm());
    };
    for (int j = 0; j < K.n; ++j) {
      sample(K.loop[j]);
      sample(K.side_midpoint(j));
    }
    for (const Vec2& p : K.quad.points) sample(p);
    const Vec2 c = K.centroid();
    for (int i = 0; i < 5; ++i)  // 5x5 grid on the cell square
      for (int j = 0; j < 5; ++j)
        sample({c.x + h * 0.25 * (i - 2) / 2.0, c.y + h * 0.25 * (j - 2) / 2.0});
    b.eta_c2[k] = sg * umax;

    const double g_diff = std::sqrt(grad_norm_sq(K, p0[k] - pn[k]));
    const double g_pn = std::sqrt(grad_norm_sq(K, pn[k]));
    b.eta_c3[k] = (sg + g_diff) * (sg + g_pn);
  }

  // interior edge jumps of nu grad(PN u) + p_h I, counted in both elements
  for (size_t e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& ed = mesh.edges[e];
    if (ed.tag != BoundaryTag::interior) continue;
    const Vec2 a = mesh.vertices[ed.v0], bb = mesh.vertices[ed.v1];
    const double len = (bb - a).norm();
    const Vec2 n = (bb - a).perp() / len;  // outward for elem_left
    const Eigen::Vector2d ne(n.x, n.y);

    auto traction = [&](int k, const Vec2& p) -> Eigen::Vector2d {
      const ElementKernel& K = kernels[k];
      const Eigen::Matrix2d g = eval_tensor(K.frame, gradpn[k], p);
      const double pr = K.frame.value(ploc[k], p);
      return nu * g * ne + pr * ne;
    };

    const QuadratureRule rule = segment_quadrature(a, bb, 4);
    double jump = 0.0;
    for (size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d j =
          traction(ed.elem_left, rule.points[q]) - traction(ed.elem_right, rule.points[q]);
      jump += rule.weights[q] * j.squaredNorm();
    }
    const double val = len * jump;
    b.eta_e[ed.elem_left] += val;   // accumulate squares first
    b.eta_e[ed.elem_right] += val;
  }

  for (int k = 0; k < nk; ++k) {
    const double esq = b.eta_e[k];
    b.eta_e[k] = std::sqrt(esq);
    b.eta_sq[k] = b.eta_f[k] * b.eta_f[k] + b.eta_B[k] * b.eta_B[k] + esq +
                  b.eta_S[k] * b.eta_S[k] + b.eta_c1[k] * b.eta_c1[k] +
                  b.eta_c2[k] * b.eta_c2[k] + b.eta_c3[k] * b.eta_c3[k];
  }
  return b;
}

std::string breakdown_csv(const QuadTreeMesh& mesh, const EstimatorBreakdown& b) {
  std::ostringstream out;
  out.precision(17);
  out << "element,h,sigma,eta_f,eta_B,eta_e,eta_S,eta_c1,eta_c2,eta_c3,eta\n";
  for (int k = 0; k < b.eta_sq.size(); ++k) {
    out << k << ',' << mesh.elements[k].h << ',' << b.sigma[k] << ',' << b.eta_f[k]
        << ',' << b.eta_B[k] << ',' << b.eta_e[k] << ',' << b.eta_S[k] << ','
        << b.eta_c1[k] << ',' << b.eta_c2[k] << ',' << b.eta_c3[k] << ','
        << std::sqrt(b.eta_sq[k]) << '\n';
  }
  const auto c = b.components();
  out << "total,,," << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << ','
      << c[4] << ',' << c[5] << ',' << c[6] << ',' << b.total() << '\n';
  return out.str();
}

}  // namespace vemns
