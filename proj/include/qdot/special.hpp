#ifndef QDOT_SPECIAL_HPP
#define QDOT_SPECIAL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace qdot::special {

inline double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline std::uint64_t factorial_u64(int n) {
  if (n < 0 || n > 20) throw std::out_of_range("factorial_u64 argument out of range");
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// Generalized Laguerre polynomial L_n^alpha(x) by upward recurrence.
inline double laguerre(int n, double alpha, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Physicists' Hermite polynomial H_n(x).
inline double hermite(int n, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Normalized Hermite function h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)),
/// evaluated by the stable three-term recurrence of the normalized functions.
inline double hermite_function(int n, double x) {
  double prev = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return prev;
  double cur = std::sqrt(2.0) * x * prev;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace qdot::special

#endif  // QDOT_SPECIAL_HPP
