#include "vemns/quadrature.hpp"

#include <Eigen/Dense>
#include <map>
#include <mutex>

namespace vemns {

namespace {

// Golub-Welsch: nodes/weights from the symmetric Jacobi matrix of the
// three-term recurrence. alpha/beta are the recurrence coefficients on the
// natural interval, mu0 the integral of the weight function.
void golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta,
                  double mu0, std::vector<double>& nodes, std::vector<double>& weights) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = alpha[i];
    if (i + 1 < n) {
      const double b = std::sqrt(beta[i + 1]);
      J(i, i + 1) = b;
      J(i + 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

// Gauss-Legendre on [-1,1].
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> alpha(n, 0.0), beta(n, 0.0);
  for (int k = 1; k < n; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);
  golub_welsch(alpha, beta, 2.0, x, w);
}

// Gauss-Jacobi with weight (1-x) on [-1,1].
void jacobi10_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> alpha(n), beta(n, 0.0);
  for (int k = 0; k < n; ++k) alpha[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k) beta[k] = k * (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
  golub_welsch(alpha, beta, 2.0, x, w);
}

struct Rule1D {
  std::vector<double> x, w;
};

const Rule1D& cached_legendre(int n) {
  static std::map<int, Rule1D> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule1D r;
    legendre_rule(n, r.x, r.w);
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

const Rule1D& cached_jacobi10(int n) {
  static std::map<int, Rule1D> cache;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Rule1D r;
    jacobi10_rule(n, r.x, r.w);
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

}  // namespace

SegmentRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  const Rule1D& r = cached_legendre(n);
  SegmentRule out;
  out.t.resize(n);
  out.w.resize(n);
  for (int i = 0; i < n; ++i) {
    out.t[i] = 0.5 * (r.x[i] + 1.0);
    out.w[i] = 0.5 * r.w[i];
  }
  return out;
}

QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int degree) {
  const int n = degree / 2 + 1;
  const SegmentRule r = gauss_legendre(n);
  const double len = (b - a).norm();
  QuadratureRule out;
  out.points.reserve(r.t.size());
  out.weights.reserve(r.t.size());
  for (size_t i = 0; i < r.t.size(); ++i) {
    out.points.push_back(a + (b - a) * r.t[i]);
    out.weights.push_back(len * r.w[i]);
  }
  return out;
}

QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c,
                                   int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_quadrature: degree >= 0");
  const int n = degree / 2 + 1;
  const Rule1D& rx = cached_jacobi10(n);  // weight (1-x) direction
  const Rule1D& rt = cached_legendre(n);
  const double area2 =
      (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);  // 2*signed area
  QuadratureRule out;
  out.points.reserve(n * n);
  out.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * (rx.x[i] + 1.0);   // in [0,1]
    const double wx = 0.25 * rx.w[i];         // includes the (1-x) weight
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (rt.x[j] + 1.0);
      const double wt = 0.5 * rt.w[j];
      const Vec2 p = a + (b - a) * x + (c - a) * (t * (1.0 - x));
      out.points.push_back(p);
      out.weights.push_back(area2 * wx * wt);
    }
  }
  return out;
}

QuadratureRule polygon_quadrature(const std::vector<Vec2>& loop, int degree) {
  if (loop.size() < 3) throw std::invalid_argument("polygon_quadrature: need >= 3 vertices");
  if (polygon_area(loop) <= 0.0)
    throw std::invalid_argument("polygon_quadrature: polygon must be CCW with positive area");
  const Vec2 c = polygon_centroid(loop);
  QuadratureRule out;
  for (size_t i = 0; i < loop.size(); ++i) {
    const QuadratureRule tri =
        triangle_quadrature(c, loop[i], loop[(i + 1) % loop.size()], degree);
    out.points.insert(out.points.end(), tri.points.begin(), tri.points.end());
    out.weights.insert(out.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return out;
}

}  // namespace vemns
