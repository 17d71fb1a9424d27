#ifndef QDOT_BASIS_HPP
#define QDOT_BASIS_HPP

// Fock-Darwin (in-plane) and harmonic-oscillator (vertical) basis functions for the
// single-particle, center-of-mass and relative roles. The CM coordinate carries mass
// 2m* and the relative coordinate m*/2, so the inverse squared oscillator lengths are
// 2*Omega and Omega/2 respectively (same for omega_z).
//
// Radial parts use the standard Laguerre polynomials, which are positive at the
// origin; this fixes the global phase of every state.

#include <cmath>
#include <compare>
#include <complex>
#include <stdexcept>

#include "special.hpp"

namespace qdot {

struct Mode2D {
  int n = 0;  // radial quantum number, >= 0
  int m = 0;  // magnetic quantum number
  auto operator<=>(const Mode2D&) const = default;
};

struct ModeZ {
  int nz = 0;
  auto operator<=>(const ModeZ&) const = default;
};

enum class Role { Single, CenterOfMass, Relative };

/// Mass factor of the role relative to m*.
inline double role_scale(Role role) {
  switch (role) {
    case Role::Single: return 1.0;
    case Role::CenterOfMass: return 2.0;
    case Role::Relative: return 0.5;
  }
  return 1.0;
}

/// Omega(2n + |m| + 1) - omega_L m. Serves all three roles.
inline double fd_energy(Mode2D mode, double omega, double omega_l) {
  return omega * (2.0 * mode.n + std::abs(mode.m) + 1.0) - omega_l * mode.m;
}

inline double z_energy(ModeZ mode, double omega_z) {
  if (!std::isfinite(omega_z)) throw std::invalid_argument("z_energy: the 2D model has no z quanta");
  return omega_z * (mode.nz + 0.5);
}

inline std::complex<double> fd_eval(Mode2D mode, Role role, double omega, double rho, double phi) {
  if (mode.n < 0) throw std::invalid_argument("fd_eval: n must be non-negative");
  if (rho < 0.0) throw std::invalid_argument("fd_eval: rho must be non-negative");
  const double w = role_scale(role) * omega;
  const int am = std::abs(mode.m);
  const double t = w * rho * rho;
  // sqrt(n!/(n+|m|)!) computed as a running product
  double norm = 1.0;
  for (int k = mode.n + 1; k <= mode.n + am; ++k) norm /= k;
  norm = std::sqrt(w / M_PI * norm);
  const double radial = norm * std::pow(std::sqrt(w) * rho, am) * std::exp(-0.5 * t) *
                        special::laguerre(mode.n, am, t);
  return std::polar(radial, mode.m * phi);
}

inline double z_eval(ModeZ mode, Role role, double omega_z, double z) {
  if (!std::isfinite(omega_z)) throw std::invalid_argument("z_eval: the 2D model has no z quanta");
  if (mode.nz < 0) throw std::invalid_argument("z_eval: nz must be non-negative");
  const double w = role_scale(role) * omega_z;
  return std::pow(w, 0.25) * special::hermite_function(mode.nz, std::sqrt(w) * z);
}

}  // namespace qdot

#endif  // QDOT_BASIS_HPP
