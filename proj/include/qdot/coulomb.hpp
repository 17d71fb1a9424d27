#ifndef QDOT_COULOMB_HPP
#define QDOT_COULOMB_HPP

// Matrix elements of 1/r12 (the Coulomb strength lambda multiplies outside).
//
// In the relative Fock-Darwin basis with t = Omega rho^2 / 2 the 2D element reduces to
//   sqrt(Omega/2) N N' int t^{|m|-1/2} e^{-t} L_n^{|m|}(t) L_{n'}^{|m|}(t) dt,
// a polynomial moment that generalized Gauss-Laguerre integrates exactly. In 3D we
// use 1/r = (2/sqrt(pi)) int_0^inf exp(-u^2 r^2) du; for fixed u both factors are
// Gaussian-weighted polynomial moments, again integrated exactly after rescaling,
// and the outer u integral runs on a mapped Gauss-Legendre grid.
//
// IP elements go through the CM transform: V depends on r12 only, so it is diagonal
// in all CM labels and in the relative m.

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "model.hpp"
#include "mosh.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace qdot {

namespace detail {

// Rules are immutable once built; the cache only grows.
inline const QuadratureRule& cached_laguerre(int nodes, int twice_alpha) {
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  static std::shared_mutex mutex;
  const auto key = std::make_pair(nodes, twice_alpha);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = gauss_laguerre(nodes, 0.5 * twice_alpha);
  std::unique_lock lock(mutex);
  return cache.try_emplace(key, std::move(rule)).first->second;
}

inline const QuadratureRule& cached_hermite(int nodes) {
  static std::map<int, QuadratureRule> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(nodes); it != cache.end()) return it->second;
  }
  auto rule = gauss_hermite(nodes);
  std::unique_lock lock(mutex);
  return cache.try_emplace(nodes, std::move(rule)).first->second;
}

inline const QuadratureRule& cached_legendre(int nodes) {
  static std::map<int, QuadratureRule> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(nodes); it != cache.end()) return it->second;
  }
  auto rule = gauss_legendre(nodes);
  std::unique_lock lock(mutex);
  return cache.try_emplace(nodes, std::move(rule)).first->second;
}

// sqrt(n! / (n+m)!)
inline double laguerre_norm(int n, int m) {
  double f = 1.0;
  for (int k = n + 1; k <= n + m; ++k) f /= k;
  return std::sqrt(f);
}

// <n,m| exp(-c t) |n',m> in the relative basis, t = Omega rho^2 / 2.
inline double radial_gaussian_moment(int n, int np, int m, double c) {
  const double scale = 1.0 + c;
  const auto& rule = cached_laguerre((n + np) / 2 + 1, 2 * m);
  const double s = rule.integrate([&](double x) {
    const double t = x / scale;
    return special::laguerre(n, m, t) * special::laguerre(np, m, t);
  });
  return laguerre_norm(n, m) * laguerre_norm(np, m) * std::pow(scale, -(m + 1.0)) * s;
}

// <nz| exp(-d xi^2) |nz'> for normalized 1D oscillator states in xi.
inline double vertical_gaussian_moment(int nz, int nzp, double d) {
  const double scale = 1.0 + d;
  const double inv = 1.0 / std::sqrt(scale);
  const auto& rule = cached_hermite((nz + nzp) / 2 + 1);
  const double s = rule.integrate([&](double x) {
    return special::hermite(nz, x * inv) * special::hermite(nzp, x * inv);
  });
  const double norm = std::sqrt(std::ldexp(1.0, nz + nzp) * special::factorial(nz) * special::factorial(nzp) * M_PI);
  return s * inv / norm;
}

}  // namespace detail

inline constexpr int kDefaultUNodes = 128;

/// <n,m| 1/rho12 |n',m> for relative Fock-Darwin states at effective frequency omega.
inline double rel_element_2d(int n, int np, int m, double omega, int extra_nodes = 0) {
  if (n < 0 || np < 0) throw std::invalid_argument("rel_element_2d: radial indices must be >= 0");
  const int am = std::abs(m);
  const auto& rule = detail::cached_laguerre((n + np) / 2 + 2 + extra_nodes, 2 * am - 1);
  const double s = rule.integrate([&](double t) {
    return special::laguerre(n, am, t) * special::laguerre(np, am, t);
  });
  return std::sqrt(omega / 2.0) * detail::laguerre_norm(n, am) * detail::laguerre_norm(np, am) * s;
}

namespace detail {

inline double rel_element_3d_unchecked(int n, int nz, int np, int nzp, int m, double omega, double omega_z,
                                       int u_nodes) {
  if ((nz + nzp) % 2 != 0) return 0.0;
  const int am = std::abs(m);
  const auto& rule = cached_legendre(u_nodes);
  const double kappa = std::sqrt(std::min(omega, omega_z) / 2.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    const double u = kappa * s / (1.0 - s);
    const double du = 0.5 * kappa / ((1.0 - s) * (1.0 - s));
    const double u2 = u * u;
    const double p = radial_gaussian_moment(n, np, am, 2.0 * u2 / omega);
    const double z = vertical_gaussian_moment(nz, nzp, 2.0 * u2 / omega_z);
    total += rule.weights[i] * du * p * z;
  }
  return 2.0 / std::sqrt(M_PI) * total;
}

}  // namespace detail

/// <n,nz,m| 1/r12 |n',nz',m> for relative states of an axially symmetric 3D oscillator.
/// Rejects odd nz + nz' (those elements vanish by reflection symmetry).
inline double rel_element_3d(int n, int nz, int np, int nzp, int m, double omega, double omega_z,
                             int u_nodes = kDefaultUNodes) {
  if (n < 0 || np < 0 || nz < 0 || nzp < 0) throw std::invalid_argument("rel_element_3d: indices must be >= 0");
  if ((nz + nzp) % 2 != 0) throw std::invalid_argument("rel_element_3d: nz + nz' must be even");
  if (!std::isfinite(omega_z)) throw std::invalid_argument("rel_element_3d: needs finite omega_z");
  return detail::rel_element_3d_unchecked(n, nz, np, nzp, m, omega, omega_z, u_nodes);
}

/// Memoized relative elements for one (Omega, omega_z) pair; omega_z = inf selects 2D.
/// Safe for concurrent readers and writers.
class RelElementCache {
 public:
  RelElementCache(double omega, double omega_z) : omega_(omega), omega_z_(omega_z) {}

  double omega() const { return omega_; }
  double omega_z() const { return omega_z_; }

  double operator()(int n, int nz, int np, int nzp, int m) const {
    if ((nz + nzp) % 2 != 0) return 0.0;
    if (std::tie(n, nz) > std::tie(np, nzp)) {
      std::swap(n, np);
      std::swap(nz, nzp);
    }
    const auto key = std::make_tuple(n, nz, np, nzp, std::abs(m));
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    const double v = std::isfinite(omega_z_)
                         ? detail::rel_element_3d_unchecked(n, nz, np, nzp, m, omega_, omega_z_, kDefaultUNodes)
                         : (nz == 0 && nzp == 0 ? rel_element_2d(n, np, m, omega_) : 0.0);
    std::unique_lock lock(mutex_);
    table_.emplace(key, v);
    return v;
  }

 private:
  double omega_, omega_z_;
  mutable std::map<std::tuple<int, int, int, int, int>, double> table_;
  mutable std::shared_mutex mutex_;
};

/// <bra| 1/r12 |ket> for IP states given as coefficient maps.
inline double ip_element(const CoeffMap<ProductState>& bra, const CoeffMap<ProductState>& ket,
                         const RelElementCache& rel) {
  const auto cb = ip_to_cm(bra);
  const auto ck = ip_to_cm(ket);
  // V is diagonal in every CM label and in the relative m.
  std::map<std::pair<Mode, int>, std::vector<std::tuple<int, int, double>>> ket_groups;
  for (const auto& [k, v] : ck) ket_groups[{k.cm, k.rel.m}].emplace_back(k.rel.n, k.rel.nz, v);
  double total = 0.0;
  for (const auto& [kb, vb] : cb) {
    auto it = ket_groups.find({kb.cm, kb.rel.m});
    if (it == ket_groups.end()) continue;
    for (const auto& [n, nz, vk] : it->second) total += vb * vk * rel(kb.rel.n, kb.rel.nz, n, nz, kb.rel.m);
  }
  return total;
}

inline double ip_element(const ProductState& bra, const ProductState& ket, double omega, double omega_z = kInf) {
  RelElementCache rel(omega, omega_z);
  return ip_element(CoeffMap<ProductState>{{bra, 1.0}}, CoeffMap<ProductState>{{ket, 1.0}}, rel);
}

}  // namespace qdot

#endif  // QDOT_COULOMB_HPP
