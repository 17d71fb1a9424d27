#ifndef QDOT_QUADRATURE_HPP
#define QDOT_QUADRATURE_HPP

// Gaussian quadrature rules built by the Golub-Welsch construction: the nodes are
// the eigenvalues of the symmetric tridiagonal Jacobi matrix of the three-term
// recurrence, the weights are mu_0 times the squared first eigenvector components.
// Nodes are then polished by Newton steps on the orthogonal polynomial.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "special.hpp"

namespace qdot {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

namespace detail {

// Implicit QL on a symmetric tridiagonal matrix (diag d, off-diagonal e with e[i]
// coupling i and i+1). On return d holds eigenvalues and z the first row of the
// eigenvector matrix.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  z.assign(n, 0.0);
  if (n == 0) return;
  z[0] = 1.0;
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    while (true) {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-17 * dd) break;
      }
      if (m == l) break;
      if (++iter > 100) throw std::runtime_error("tridiagonal QL did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

inline QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> offdiag, double mu0) {
  std::vector<double> z;
  detail::tridiagonal_ql(diag, std::move(offdiag), z);
  std::vector<std::size_t> order(diag.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return diag[a] < diag[b]; });
  QuadratureRule rule;
  for (auto i : order) {
    rule.nodes.push_back(diag[i]);
    rule.weights.push_back(mu0 * z[i] * z[i]);
  }
  return rule;
}

}  // namespace detail

/// n-point rule for the weight t^alpha e^{-t} on [0, inf); exact for polynomials of degree <= 2n-1.
inline QuadratureRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre needs at least one node");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre needs alpha > -1");
  std::vector<double> d(n), e(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = 2.0 * i + alpha + 1.0;
  for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
  auto rule = detail::golub_welsch(d, e, std::tgamma(alpha + 1.0));
  // Newton polish: L_n^alpha(x) = 0, L'_n = (n L_n - (n+alpha) L_{n-1}) / x.
  for (auto& x : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      const double p = special::laguerre(n, alpha, x);
      const double q = special::laguerre(n - 1, alpha, x);
      const double dp = (n * p - (n + alpha) * q) / x;
      if (dp == 0.0) break;
      x -= p / dp;
    }
  }
  return rule;
}

/// n-point rule for the weight e^{-x^2} on the real line.
inline QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite needs at least one node");
  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt((i + 1.0) / 2.0);
  auto rule = detail::golub_welsch(d, e, std::sqrt(M_PI));
  for (auto& x : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      // h_n'(x) = sqrt(2n) h_{n-1}(x) - x h_n(x) for normalized Hermite functions.
      const double p = special::hermite_function(n, x);
      const double dp = std::sqrt(2.0 * n) * special::hermite_function(n - 1, x) - x * p;
      if (dp == 0.0) break;
      x -= p / dp;
    }
  }
  return rule;
}

/// n-point Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs at least one node");
  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double k = i + 1.0;
    e[i] = k / std::sqrt(4.0 * k * k - 1.0);
  }
  auto rule = detail::golub_welsch(d, e, 2.0);
  for (auto& x : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      if (dp == 0.0 || !std::isfinite(dp)) break;
      x -= p1 / dp;
    }
  }
  return rule;
}

}  // namespace qdot

#endif  // QDOT_QUADRATURE_HPP
