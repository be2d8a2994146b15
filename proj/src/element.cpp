#include "vemns/element.hpp"

namespace vemns {

namespace {

// quadratic Lagrange shapes on a side, nodes at the endpoints and midpoint
inline void side_shapes(double s, double& n0, double& nm, double& n1) {
  n0 = (2.0 * s - 1.0) * (s - 1.0);
  nm = 4.0 * s * (1.0 - s);
  n1 = s * (2.0 * s - 1.0);
}

struct SideGeom {
  Vec2 a, b;     // endpoints (loop order)
  Vec2 normal;   // outward unit normal
  double len;
};

std::vector<SideGeom> side_geometry(const std::vector<Vec2>& loop) {
  const int n = static_cast<int>(loop.size());
  std::vector<SideGeom> sides(n);
  for (int j = 0; j < n; ++j) {
    SideGeom& s = sides[j];
    s.a = loop[j];
    s.b = loop[(j + 1) % n];
    const Vec2 t = s.b - s.a;
    s.len = t.norm();
    s.normal = t.perp() / s.len;
  }
  return sides;
}

}  // namespace

ElementKernel build_element_kernel(const std::vector<Vec2>& loop, int quad_degree) {
  ElementKernel K;
  K.loop = loop;
  K.n = static_cast<int>(loop.size());
  if (K.n < 3) throw std::invalid_argument("element needs at least 3 vertices");
  K.ndof = 4 * K.n + 2;
  K.area = polygon_area(loop);
  if (!(K.area > 0.0)) throw std::invalid_argument("element loop must be CCW");
  K.frame = ScaledBasis{polygon_centroid(loop), polygon_diameter(loop)};
  K.quad = polygon_quadrature(loop, quad_degree);

  const int n = K.n;
  const int nd = K.ndof;
  const double h = K.frame.h;
  const double area = K.area;
  const ScaledBasis& fr = K.frame;

  // ---- bulk monomial mass up to degree 3
  const int Q = static_cast<int>(K.quad.size());
  Eigen::MatrixXd Mq(Q, 10);
  for (int q = 0; q < Q; ++q) {
    double vals[10];
    fr.eval(3, K.quad.points[q], vals);
    for (int l = 0; l < 10; ++l) Mq(q, l) = vals[l];
  }
  K.mass3 = Mq.transpose() * Eigen::Map<const Eigen::VectorXd>(K.quad.weights.data(), Q).asDiagonal() * Mq;
  const Eigen::MatrixXd mass2 = K.mass3.topLeftCorner(6, 6);
  const Eigen::MatrixXd H1 = K.mass3.topLeftCorner(3, 3);

  // ---- derivative coefficient maps for scalar monomials
  // deg-2 monomials -> deg-1 coefficients
  Eigen::MatrixXd Dx2 = Eigen::MatrixXd::Zero(3, 6), Dy2 = Eigen::MatrixXd::Zero(3, 6);
  // deg-3 monomials -> deg-2 coefficients
  Eigen::MatrixXd Dx3 = Eigen::MatrixXd::Zero(6, 10), Dy3 = Eigen::MatrixXd::Zero(6, 10);
  {
    const auto& exps = monomial_exponents(3);
    for (int i = 0; i < 10; ++i) {
      const auto [a, b] = exps[i];
      if (a > 0) {
        const int t = monomial_index(a - 1, b);
        Dx3(t, i) = a / h;
        if (i < 6) Dx2(t, i) = a / h;
      }
      if (b > 0) {
        const int t = monomial_index(a, b - 1);
        Dy3(t, i) = b / h;
        if (i < 6) Dy2(t, i) = b / h;
      }
    }
  }

  // ---- boundary machinery: 4-point Gauss per side, quadratic traces
  const std::vector<SideGeom> sides = side_geometry(loop);
  const SegmentRule srule = gauss_legendre(4);
  // accumulate over the boundary: cb(x) per component feeds the trace dofs
  // row[dof] += w * weight_fn(x, side) * shape
  auto boundary_row = [&](const std::function<double(const Vec2&, const SideGeom&, int comp)>& wfn,
                          Eigen::RowVectorXd& row) {
    for (int j = 0; j < n; ++j) {
      const SideGeom& sg = sides[j];
      for (size_t q = 0; q < srule.t.size(); ++q) {
        const double s = srule.t[q];
        const double w = srule.w[q] * sg.len;
        const Vec2 x = sg.a + (sg.b - sg.a) * s;
        double n0, nm, n1;
        side_shapes(s, n0, nm, n1);
        for (int c = 0; c < 2; ++c) {
          const double g = wfn(x, sg, c);
          if (g == 0.0) continue;
          row[2 * j + c] += w * g * n0;
          row[2 * n + 2 * j + c] += w * g * nm;
          row[2 * ((j + 1) % n) + c] += w * g * n1;
        }
      }
    }
  };

  // ---- flux row and divergence moments:  b_loc(alpha, .) = int_E div(v) m_alpha
  K.b_loc = Eigen::MatrixXd::Zero(3, nd);
  {
    Eigen::RowVectorXd flux = Eigen::RowVectorXd::Zero(nd);
    boundary_row([&](const Vec2&, const SideGeom& sg, int c) {
      return c == 0 ? sg.normal.x : sg.normal.y;
    }, flux);
    K.b_loc.row(0) = flux;
    K.b_loc(1, 4 * n + 0) = area / h;
    K.b_loc(2, 4 * n + 1) = area / h;
  }
  K.div_map = H1.llt().solve(K.b_loc);

  // ---- mean of each component: int_E v_c = -int div(v) p_c + int_bnd (v.n) p_c,
  // p_c = h * m_{1+c}
  Eigen::MatrixXd mean_map = Eigen::MatrixXd::Zero(2, nd);
  for (int c = 0; c < 2; ++c) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nd);
    boundary_row([&](const Vec2& x, const SideGeom& sg, int cc) {
      double m[3];
      fr.eval(1, x, m);
      const double nn = cc == 0 ? sg.normal.x : sg.normal.y;
      return nn * h * m[1 + c];
    }, row);
    row[4 * n + c] -= area;  // h * (|E|/h) * divergence dof
    mean_map.row(c) = row;
  }

  // ---- polynomial stiffness (block diagonal over components)
  Eigen::MatrixXd Gs = Dx2.transpose() * H1 * Dx2 + Dy2.transpose() * H1 * Dy2;
  Eigen::MatrixXd stiff_poly = Eigen::MatrixXd::Zero(12, 12);
  stiff_poly.topLeftCorner(6, 6) = Gs;
  stiff_poly.bottomRightCorner(6, 6) = Gs;

  // ---- energy projection
  Eigen::MatrixXd Bhat = Eigen::MatrixXd::Zero(12, nd);
  for (int c = 0; c < 2; ++c) {
    for (int al = 0; al < 6; ++al) {
      const int beta = c * 6 + al;
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nd);
      boundary_row([&](const Vec2& x, const SideGeom& sg, int cc) {
        if (cc != c) return 0.0;
        double m[3];
        fr.eval(1, x, m);
        double gx = 0.0, gy = 0.0;
        for (int l = 0; l < 3; ++l) {
          gx += Dx2(l, al) * m[l];
          gy += Dy2(l, al) * m[l];
        }
        return gx * sg.normal.x + gy * sg.normal.y;
      }, row);
      // constant laplacian of the degree<=2 monomial
      const auto [ea, eb] = monomial_exponents(2)[al];
      double lam = 0.0;
      if (ea == 2) lam = 2.0 / (h * h);
      if (eb == 2) lam = 2.0 / (h * h);
      Bhat.row(beta) = row - lam * mean_map.row(c);
    }
  }
  Eigen::MatrixXd Ghat = stiff_poly;
  {
    // kernel rows: boundary mean of each component
    Eigen::RowVectorXd bmono = Eigen::RowVectorXd::Zero(6);
    for (int j = 0; j < n; ++j) {
      const SideGeom& sg = sides[j];
      for (size_t q = 0; q < srule.t.size(); ++q) {
        const Vec2 x = sg.a + (sg.b - sg.a) * srule.t[q];
        double m[6];
        fr.eval(2, x, m);
        for (int l = 0; l < 6; ++l) bmono[l] += srule.w[q] * sg.len * m[l];
      }
    }
    Ghat.row(0).setZero();
    Ghat.row(0).head(6) = bmono;
    Ghat.row(6).setZero();
    Ghat.row(6).tail(6) = bmono;
    for (int c = 0; c < 2; ++c) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nd);
      boundary_row([&](const Vec2&, const SideGeom&, int cc) {
        return cc == c ? 1.0 : 0.0;
      }, row);
      Bhat.row(c * 6) = row;
    }
  }
  K.proj_nabla = Ghat.partialPivLu().solve(Bhat);

  // ---- dofs of the polynomial basis fields
  K.dofmat = Eigen::MatrixXd::Zero(nd, 12);
  for (int c = 0; c < 2; ++c) {
    for (int al = 0; al < 6; ++al) {
      const int beta = c * 6 + al;
      for (int i = 0; i < n; ++i) {
        double m[6];
        fr.eval(2, loop[i], m);
        K.dofmat(2 * i + c, beta) = m[al];
        fr.eval(2, K.side_midpoint(i), m);
        K.dofmat(2 * n + 2 * i + c, beta) = m[al];
      }
      // divergence moments: int (d_c m_al) m_{1+cc} * h/|E|
      const Eigen::MatrixXd& Dc = (c == 0) ? Dx2 : Dy2;
      for (int cc = 0; cc < 2; ++cc) {
        double v = 0.0;
        for (int l = 0; l < 3; ++l) v += Dc(l, al) * H1(l, 1 + cc);
        K.dofmat(4 * n + cc, beta) = v * h / area;
      }
    }
  }

  // ---- local momentum form at nu = 1
  {
    const Eigen::MatrixXd stab =
        Eigen::MatrixXd::Identity(nd, nd) - K.dofmat * K.proj_nabla;
    K.a_unit = K.proj_nabla.transpose() * stiff_poly * K.proj_nabla +
               stab.transpose() * stab;
  }

  // ---- L2 projection onto [P2]^2 via the gradient/perp splitting
  {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(12, 12);   // split-basis coefficients
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(12, nd);  // moments against split basis
    for (int j = 0; j < 9; ++j) {
      const int gam = j + 1;  // monomial of degree 1..3
      S.col(j).head(6) = Dx3.col(gam);
      S.col(j).tail(6) = Dy3.col(gam);
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nd);
      boundary_row([&](const Vec2& x, const SideGeom& sg, int cc) {
        double m[10];
        fr.eval(3, x, m);
        return (cc == 0 ? sg.normal.x : sg.normal.y) * m[gam];
      }, row);
      mu.row(j) = row - K.mass3.row(gam).head(3) * K.div_map;
    }
    // perp fields (m_eta, -m_xi) * m_l, l = 0..2
    for (int l = 0; l < 3; ++l) {
      Eigen::VectorXd ex = Eigen::VectorXd::Zero(6), ey = Eigen::VectorXd::Zero(6);
      const auto [la, lb] = monomial_exponents(1)[l];
      ex[monomial_index(la + 0, lb + 1)] = 1.0;   // m_eta * m_l
      ey[monomial_index(la + 1, lb + 0)] = -1.0;  // -m_xi * m_l
      S.col(9 + l).head(6) = ex;
      S.col(9 + l).tail(6) = ey;
      // enhanced-space moments agree with the energy projection
      mu.row(9 + l) = ex.transpose() * mass2 * K.proj_nabla.topRows(6) +
                      ey.transpose() * mass2 * K.proj_nabla.bottomRows(6);
    }
    const Eigen::MatrixXd Mquad = S.transpose().partialPivLu().solve(mu);
    Eigen::MatrixXd P0(12, nd);
    Eigen::LLT<Eigen::MatrixXd> m2(mass2);
    P0.topRows(6) = m2.solve(Mquad.topRows(6));
    P0.bottomRows(6) = m2.solve(Mquad.bottomRows(6));
    K.proj_l2 = P0;
  }

  // ---- L2 projection of the gradient onto [P1]^{2x2}
  {
    Eigen::MatrixXd BG = Eigen::MatrixXd::Zero(12, nd);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        for (int al = 0; al < 3; ++al) {
          const int t = (2 * r + c) * 3 + al;
          Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nd);
          boundary_row([&](const Vec2& x, const SideGeom& sg, int cc) {
            if (cc != r) return 0.0;
            double m[3];
            fr.eval(1, x, m);
            return m[al] * (c == 0 ? sg.normal.x : sg.normal.y);
          }, row);
          if (al == 1 + c) row -= mean_map.row(r) / h;  // d_c m_al is constant
          BG.row(t) = row;
        }
      }
    }
    K.proj_grad.resize(12, nd);
    Eigen::LLT<Eigen::MatrixXd> h1(H1);
    for (int blk = 0; blk < 4; ++blk)
      K.proj_grad.middleRows(3 * blk, 3) = h1.solve(BG.middleRows(3 * blk, 3));
  }

  return K;
}

ConvectivePair convective_newton(const ElementKernel& K, const Eigen::VectorXd& w,
                                 bool skew_form) {
  const int nd = K.ndof;
  const int Q = static_cast<int>(K.quad.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nd, nd);  // trial in the gradient slot
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nd, nd);  // trial advecting
  Eigen::MatrixXd E;                                  // test paired with w (skew only)
  if (skew_form) E = Eigen::MatrixXd::Zero(nd, nd);
  Eigen::VectorXd cvec = Eigen::VectorXd::Zero(nd);

  const Eigen::VectorXd w0c = K.proj_l2 * w;    // [P2]^2 coefficients of w
  const Eigen::VectorXd wgc = K.proj_grad * w;  // [P1]^{2x2} coefficients of grad w

  Eigen::RowVectorXd ax(nd), ay(nd);
  Eigen::RowVectorXd g00(nd), g01(nd), g10(nd), g11(nd);
  for (int q = 0; q < Q; ++q) {
    const double wq = K.quad.weights[q];
    const Vec2 x = K.quad.points[q];
    double m6[6];
    K.frame.eval(2, x, m6);
    const Eigen::Map<const Eigen::RowVectorXd> m6v(m6, 6);
    const Eigen::Map<const Eigen::RowVectorXd> m3v(m6, 3);

    ax.noalias() = m6v * K.proj_l2.topRows(6);
    ay.noalias() = m6v * K.proj_l2.bottomRows(6);
    g00.noalias() = m3v * K.proj_grad.middleRows(0, 3);
    g01.noalias() = m3v * K.proj_grad.middleRows(3, 3);
    g10.noalias() = m3v * K.proj_grad.middleRows(6, 3);
    g11.noalias() = m3v * K.proj_grad.middleRows(9, 3);

    const double wx = m6v * w0c.head(6);
    const double wy = m6v * w0c.tail(6);
    const double t00 = m3v * wgc.segment(0, 3);
    const double t01 = m3v * wgc.segment(3, 3);
    const double t10 = m3v * wgc.segment(6, 3);
    const double t11 = m3v * wgc.segment(9, 3);

    // C_ij = V_i . (T_j w0)
    C.noalias() += wq * ax.transpose() * (wx * g00 + wy * g01);
    C.noalias() += wq * ay.transpose() * (wx * g10 + wy * g11);
    // D_ij = V_i . (Tw V_j)
    D.noalias() += wq * ax.transpose() * (t00 * ax + t01 * ay);
    D.noalias() += wq * ay.transpose() * (t10 * ax + t11 * ay);
    // cvec_i = V_i . (Tw w0)
    const double s0 = t00 * wx + t01 * wy;
    const double s1 = t10 * wx + t11 * wy;
    cvec.noalias() += wq * (s0 * ax + s1 * ay).transpose();
    if (skew_form) {
      // E_ij = (T_i V_j) . Vw
      E.noalias() += wq * g00.transpose() * (wx * ax);
      E.noalias() += wq * g01.transpose() * (wx * ay);
      E.noalias() += wq * g10.transpose() * (wy * ax);
      E.noalias() += wq * g11.transpose() * (wy * ay);
    }
  }

  ConvectivePair out;
  if (!skew_form) {
    out.jac = C + D;
    out.rhs = out.jac * w - cvec;
  } else {
    out.jac = 0.5 * (C + D - E - C.transpose());
    const Eigen::VectorXd cvec_skew = 0.5 * (cvec - E * w);
    out.rhs = out.jac * w - cvec_skew;
  }
  return out;
}

Eigen::VectorXd local_load(const ElementKernel& K,
                           const std::function<Vec2(const Vec2&)>& f,
                           int quad_degree) {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(K.ndof);
  if (!f) return F;
  const QuadratureRule rule = polygon_quadrature(K.loop, quad_degree);
  for (size_t q = 0; q < rule.size(); ++q) {
    const Vec2 x = rule.points[q];
    const Vec2 fx = f(x);
    double m6[6];
    K.frame.eval(2, x, m6);
    const Eigen::Map<const Eigen::RowVectorXd> m6v(m6, 6);
    F.noalias() += rule.weights[q] *
                   (fx.x * (m6v * K.proj_l2.topRows(6)) +
                    fx.y * (m6v * K.proj_l2.bottomRows(6))).transpose();
  }
  return F;
}

double stab_seminorm(const ElementKernel& K, const Eigen::VectorXd& u) {
  const Eigen::VectorXd r = u - K.dofmat * (K.proj_nabla * u);
  return r.norm();
}

Vec2 eval_vec2(const ScaledBasis& frame, const Eigen::VectorXd& c12, const Vec2& p) {
  double m[6];
  frame.eval(2, p, m);
  const Eigen::Map<const Eigen::RowVectorXd> mv(m, 6);
  return {mv * c12.head(6), mv * c12.tail(6)};
}

Eigen::Matrix2d eval_tensor(const ScaledBasis& frame, const Eigen::VectorXd& c12,
                            const Vec2& p) {
  double m[3];
  frame.eval(1, p, m);
  const Eigen::Map<const Eigen::RowVectorXd> mv(m, 3);
  Eigen::Matrix2d T;
  T(0, 0) = mv * c12.segment(0, 3);
  T(0, 1) = mv * c12.segment(3, 3);
  T(1, 0) = mv * c12.segment(6, 3);
  T(1, 1) = mv * c12.segment(9, 3);
  return T;
}

Eigen::VectorXd interpolate_velocity(const ElementKernel& K,
                                     const std::function<Vec2(const Vec2&)>& u,
                                     const std::function<double(const Vec2&)>& div_u,
                                     int quad_degree) {
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(K.ndof);
  for (int i = 0; i < K.n; ++i) {
    const Vec2 uv = u(K.loop[i]);
    dofs[2 * i] = uv.x;
    dofs[2 * i + 1] = uv.y;
    const Vec2 um = u(K.side_midpoint(i));
    dofs[2 * K.n + 2 * i] = um.x;
    dofs[2 * K.n + 2 * i + 1] = um.y;
  }
  if (div_u) {
    const QuadratureRule rule = polygon_quadrature(K.loop, quad_degree);
    double mx = 0.0, my = 0.0;
    for (size_t q = 0; q < rule.size(); ++q) {
      double m[3];
      K.frame.eval(1, rule.points[q], m);
      const double d = div_u(rule.points[q]) * rule.weights[q];
      mx += d * m[1];
      my += d * m[2];
    }
    dofs[4 * K.n] = mx * K.h() / K.area;
    dofs[4 * K.n + 1] = my * K.h() / K.area;
  }
  return dofs;
}

}  // namespace vemns
