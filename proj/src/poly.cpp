#include "vemns/poly.hpp"

#include <mutex>
#include <stdexcept>

namespace vemns {

const std::vector<MonomialExp>& monomial_exponents(int deg) {
  constexpr int kMaxDeg = 15;
  static const std::vector<MonomialExp> table = [] {
    std::vector<MonomialExp> t;
    for (int d = 0; d <= kMaxDeg; ++d)
      for (int b = 0; b <= d; ++b) t.push_back({d - b, b});
    return t;
  }();
  if (deg > kMaxDeg) throw std::invalid_argument("monomial degree too large");
  return table;
}

void ScaledBasis::eval(int deg, const Vec2& p, double* out) const {
  const double xi = (p.x - center.x) / h;
  const double eta = (p.y - center.y) / h;
  // powers
  double px[16], py[16];
  px[0] = py[0] = 1.0;
  for (int i = 1; i <= deg; ++i) {
    px[i] = px[i - 1] * xi;
    py[i] = py[i - 1] * eta;
  }
  int idx = 0;
  for (int d = 0; d <= deg; ++d)
    for (int b = 0; b <= d; ++b) out[idx++] = px[d - b] * py[b];
}

Eigen::VectorXd ScaledBasis::eval(int deg, const Vec2& p) const {
  Eigen::VectorXd out(n_monomials(deg));
  eval(deg, p, out.data());
  return out;
}

Eigen::VectorXd ScaledBasis::dx(const Eigen::VectorXd& c) const {
  const int deg = poly_degree_of_size(static_cast<int>(c.size()));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_monomials(std::max(0, deg - 1)));
  const auto& exps = monomial_exponents(deg);
  for (int i = 0; i < c.size(); ++i) {
    const auto [a, b] = exps[i];
    if (a > 0) out[monomial_index(a - 1, b)] += a / h * c[i];
  }
  return out;
}

Eigen::VectorXd ScaledBasis::dy(const Eigen::VectorXd& c) const {
  const int deg = poly_degree_of_size(static_cast<int>(c.size()));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_monomials(std::max(0, deg - 1)));
  const auto& exps = monomial_exponents(deg);
  for (int i = 0; i < c.size(); ++i) {
    const auto [a, b] = exps[i];
    if (b > 0) out[monomial_index(a, b - 1)] += b / h * c[i];
  }
  return out;
}

Eigen::VectorXd ScaledBasis::laplacian(const Eigen::VectorXd& c) const {
  const int deg = poly_degree_of_size(static_cast<int>(c.size()));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_monomials(std::max(0, deg - 2)));
  const auto& exps = monomial_exponents(deg);
  for (int i = 0; i < c.size(); ++i) {
    const auto [a, b] = exps[i];
    if (a > 1) out[monomial_index(a - 2, b)] += a * (a - 1) / (h * h) * c[i];
    if (b > 1) out[monomial_index(a, b - 2)] += b * (b - 1) / (h * h) * c[i];
  }
  return out;
}

Eigen::VectorXd ScaledBasis::product(const Eigen::VectorXd& ca, const Eigen::VectorXd& cb) {
  const int da = poly_degree_of_size(static_cast<int>(ca.size()));
  const int db = poly_degree_of_size(static_cast<int>(cb.size()));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_monomials(da + db));
  const auto& ea = monomial_exponents(da);
  const auto& eb = monomial_exponents(std::max(da, db));
  for (int i = 0; i < ca.size(); ++i) {
    if (ca[i] == 0.0) continue;
    for (int j = 0; j < cb.size(); ++j) {
      if (cb[j] == 0.0) continue;
      out[monomial_index(ea[i].a + eb[j].a, ea[i].b + eb[j].b)] += ca[i] * cb[j];
    }
  }
  return out;
}

double ScaledBasis::value(const Eigen::VectorXd& c, const Vec2& p) const {
  const int deg = poly_degree_of_size(static_cast<int>(c.size()));
  Eigen::VectorXd m = eval(deg, p);
  return m.dot(c);
}

int poly_degree_of_size(int n) {
  for (int d = 0; d <= 16; ++d)
    if (n_monomials(d) == n) return d;
  throw std::invalid_argument("coefficient vector size is not triangular");
}

}  // namespace vemns
