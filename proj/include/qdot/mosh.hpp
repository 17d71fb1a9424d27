#ifndef QDOT_MOSH_HPP
#define QDOT_MOSH_HPP

// Exact transformations between the individual-particle (IP) product basis and the
// center-of-mass x relative (CM) basis for two equal-mass particles in the same
// oscillator.
//
// Each oscillator state is written as a normalized monomial in circular creation
// operators a_+^dag, a_-^dag (and a_z^dag). For a mode (n, m) the circular quanta are
// n_+ = n + max(m, 0), n_- = n + max(-m, 0), and the Fock-Darwin function equals
// (-1)^n times the monomial state. The CM and relative operators are
// A = (a1 + a2)/sqrt(2), B = (a1 - a2)/sqrt(2), and the inverse map has the same form,
// so both directions reduce to expanding (x + y)^e1 (x - y)^e2 per component.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "special.hpp"

namespace qdot {

/// In-plane (n, m) plus vertical nz labels of one oscillator. nz stays 0 in the 2D model.
struct Mode {
  int n = 0;
  int m = 0;
  int nz = 0;

  int quanta() const { return 2 * n + std::abs(m) + nz; }
  auto operator<=>(const Mode&) const = default;
};

/// Phi_{mode1}(r1) Phi_{mode2}(r2).
struct ProductState {
  Mode first;
  Mode second;
  auto operator<=>(const ProductState&) const = default;
};

/// Phi^cm_{cm}(R) Phi^rel_{rel}(r12).
struct CmRelState {
  Mode cm;
  Mode rel;
  auto operator<=>(const CmRelState&) const = default;
};

template <class Key>
using CoeffMap = std::map<Key, double>;

template <class Key>
double norm_squared(const CoeffMap<Key>& c) {
  double s = 0.0;
  for (const auto& [k, v] : c) s += v * v;
  return s;
}

template <class Key>
double inner(const CoeffMap<Key>& a, const CoeffMap<Key>& b) {
  double s = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end()) s += v * it->second;
  }
  return s;
}

/// a += scale * b.
template <class Key>
void accumulate(CoeffMap<Key>& a, const CoeffMap<Key>& b, double scale = 1.0) {
  for (const auto& [k, v] : b) a[k] += scale * v;
}

template <class Key>
void prune(CoeffMap<Key>& a, double tol = 1e-14) {
  std::erase_if(a, [tol](const auto& kv) { return std::fabs(kv.second) <= tol; });
}

/// Amplitude kept as sign * sqrt(num/den) with integers; used to validate the
/// floating-point expansion on small shells.
struct ExactAmplitude {
  int sign = 0;
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return sign * std::sqrt(static_cast<double>(num) / static_cast<double>(den)); }
};

namespace detail {

struct Circular {
  int plus, minus;
};

inline Circular circular(const Mode& mode) {
  if (mode.n < 0 || mode.nz < 0) throw std::invalid_argument("mode quantum numbers must be non-negative");
  return {mode.n + std::max(mode.m, 0), mode.n + std::max(-mode.m, 0)};
}

inline Mode from_circular(int plus, int minus, int nz) {
  const int n = std::min(plus, minus);
  return {n, plus - minus, nz};
}

inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

// Integer coefficients K(r) of y^r in (x + y)^e1 (x - y)^e2.
inline std::vector<std::int64_t> split_coefficients(int e1, int e2) {
  std::vector<std::int64_t> k(e1 + e2 + 1, 0);
  for (int j = 0; j <= e1; ++j)
    for (int i = 0; i <= e2; ++i)
      k[j + i] += special::binomial(e1, j) * special::binomial(e2, i) * ((i % 2 == 0) ? 1 : -1);
  return k;
}

// One circular component: amplitude of x^{E-r} y^r in the normalized expansion of
// (X^dag)^e1 (Y^dag)^e2 / sqrt(e1! e2!) with X = (x+y)/sqrt2, Y = (x-y)/sqrt2.
struct ComponentExpansion {
  int total;
  std::vector<std::int64_t> k;
  std::vector<double> amp;
};

inline ComponentExpansion expand_component(int e1, int e2) {
  ComponentExpansion c{e1 + e2, split_coefficients(e1, e2), {}};
  const double base = special::factorial(e1) * special::factorial(e2) * std::ldexp(1.0, c.total);
  c.amp.resize(c.k.size());
  for (int r = 0; r <= c.total; ++r) {
    const double f = special::factorial(c.total - r) * special::factorial(r);
    c.amp[r] = static_cast<double>(c.k[r]) * std::sqrt(f / base);
  }
  return c;
}

template <class OutKey, class Make>
CoeffMap<OutKey> rotate_pair(const Mode& a, const Mode& b, Make make) {
  const auto ca = circular(a), cb = circular(b);
  const auto plus = expand_component(ca.plus, cb.plus);
  const auto minus = expand_component(ca.minus, cb.minus);
  const auto zed = expand_component(a.nz, b.nz);
  const int in_sign = parity_sign(a.n + b.n);
  CoeffMap<OutKey> out;
  for (int rp = 0; rp <= plus.total; ++rp) {
    if (plus.k[rp] == 0) continue;
    for (int rm = 0; rm <= minus.total; ++rm) {
      if (minus.k[rm] == 0) continue;
      for (int rz = 0; rz <= zed.total; ++rz) {
        if (zed.k[rz] == 0) continue;
        const Mode first = from_circular(plus.total - rp, minus.total - rm, zed.total - rz);
        const Mode second = from_circular(rp, rm, rz);
        const int sign = in_sign * parity_sign(first.n + second.n);
        out[make(first, second)] = sign * plus.amp[rp] * minus.amp[rm] * zed.amp[rz];
      }
    }
  }
  return out;
}

}  // namespace detail

/// Circular-mode coefficient of Phi^cm_{0,m_cm} Phi^rel_{0,m} on Phi_{0,M-j-k} Phi_{0,j+k}.
inline double a_coeff(int m_cm, int m, int j, int k) {
  if (m_cm < 0 || m < 0) throw std::invalid_argument("a_coeff needs m_cm, m >= 0");
  if (j < 0 || j > m_cm || k < 0 || k > m) throw std::out_of_range("a_coeff index out of range");
  const int M = m_cm + m;
  const double f = special::factorial(M - j - k) * special::factorial(j + k) /
                   (std::ldexp(1.0, M) * special::factorial(m_cm) * special::factorial(m));
  return ((k % 2 == 0) ? 1.0 : -1.0) * static_cast<double>(special::binomial(m_cm, j)) *
         static_cast<double>(special::binomial(m, k)) * std::sqrt(f);
}

/// Expansion of a CM x relative state over IP products.
inline CoeffMap<ProductState> cm_to_ip(const CmRelState& state) {
  return detail::rotate_pair<ProductState>(state.cm, state.rel,
                                           [](Mode a, Mode b) { return ProductState{a, b}; });
}

/// Expansion of an IP product over CM x relative states.
inline CoeffMap<CmRelState> ip_to_cm(const ProductState& state) {
  return detail::rotate_pair<CmRelState>(state.first, state.second,
                                         [](Mode a, Mode b) { return CmRelState{a, b}; });
}

inline CoeffMap<ProductState> cm_to_ip(const CoeffMap<CmRelState>& states) {
  CoeffMap<ProductState> out;
  for (const auto& [k, v] : states) accumulate(out, cm_to_ip(k), v);
  prune(out);
  return out;
}

inline CoeffMap<CmRelState> ip_to_cm(const CoeffMap<ProductState>& states) {
  CoeffMap<CmRelState> out;
  for (const auto& [k, v] : states) accumulate(out, ip_to_cm(k), v);
  prune(out);
  return out;
}

/// Same expansion as cm_to_ip with every amplitude kept exact. Limited to small shells.
inline std::map<ProductState, ExactAmplitude> cm_to_ip_exact(const CmRelState& state) {
  if (state.cm.quanta() + state.rel.quanta() > 12)
    throw std::out_of_range("exact transform limited to 12 quanta");
  const auto ca = detail::circular(state.cm), cb = detail::circular(state.rel);
  const std::array<std::array<int, 2>, 3> e{{{ca.plus, cb.plus}, {ca.minus, cb.minus}, {state.cm.nz, state.rel.nz}}};
  std::array<std::vector<std::int64_t>, 3> k;
  std::uint64_t den = 1;
  int total[3];
  for (int c = 0; c < 3; ++c) {
    k[c] = detail::split_coefficients(e[c][0], e[c][1]);
    total[c] = e[c][0] + e[c][1];
    den *= special::factorial_u64(e[c][0]) * special::factorial_u64(e[c][1]) << total[c];
  }
  const int in_sign = detail::parity_sign(state.cm.n + state.rel.n);
  std::map<ProductState, ExactAmplitude> out;
  for (int rp = 0; rp <= total[0]; ++rp)
    for (int rm = 0; rm <= total[1]; ++rm)
      for (int rz = 0; rz <= total[2]; ++rz) {
        const std::int64_t kk = k[0][rp] * k[1][rm] * k[2][rz];
        if (kk == 0) continue;
        const Mode first = detail::from_circular(total[0] - rp, total[1] - rm, total[2] - rz);
        const Mode second = detail::from_circular(rp, rm, rz);
        std::uint64_t num = static_cast<std::uint64_t>(kk * kk);
        for (int r : {total[0] - rp, rp, total[1] - rm, rm, total[2] - rz, rz}) num *= special::factorial_u64(r);
        const std::uint64_t g = std::gcd(num, den);
        const int sign = (kk > 0 ? 1 : -1) * in_sign * detail::parity_sign(first.n + second.n);
        out[ProductState{first, second}] = ExactAmplitude{sign, num / g, den / g};
      }
  return out;
}

/// Normalized (anti)symmetrized product {Phi_a(r1), Phi_b(r2)}_+-; empty when the
/// antisymmetric combination of identical modes vanishes.
inline CoeffMap<ProductState> symmetrize(const ProductState& state, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("symmetrize sign must be +1 or -1");
  CoeffMap<ProductState> out;
  if (state.first == state.second) {
    if (sign == 1) out[state] = 1.0;
    return out;
  }
  const double a = 1.0 / std::sqrt(2.0);
  out[state] = a;
  out[ProductState{state.second, state.first}] = sign * a;
  return out;
}

/// Swaps particle labels of every key.
inline CoeffMap<ProductState> exchange(const CoeffMap<ProductState>& c) {
  CoeffMap<ProductState> out;
  for (const auto& [k, v] : c) out[ProductState{k.second, k.first}] = v;
  return out;
}

}  // namespace qdot

#endif  // QDOT_MOSH_HPP
