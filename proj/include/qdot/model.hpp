#ifndef QDOT_MODEL_HPP
#define QDOT_MODEL_HPP

// Dot parameters in scaled units: hbar = omega_0 = l_0 = m* = 1.
// Every energy is in hbar*omega_0, every length in l_0.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace qdot {

enum class Dimension { TwoD, ThreeD };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ModelParams {
  double wz_ratio = kInf;        // omega_z / omega_0; infinite selects the 2D model
  double lambda = 2.0;           // Coulomb strength, equals the Wigner parameter R_W
  double g_star = -0.44;         // effective Lande factor
  double mass_ratio = 0.067;     // m* / m_e
  std::optional<double> hbar_omega0_meV = 3.165;
  Dimension dimension = Dimension::TwoD;

  bool is_2d() const { return dimension == Dimension::TwoD; }

  /// Throws std::invalid_argument when the parameter set is inconsistent.
  void validate() const {
    if (!(wz_ratio > 0.0)) throw std::invalid_argument("wz_ratio must be positive or inf");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
    if (!(mass_ratio > 0.0)) throw std::invalid_argument("mass_ratio must be positive");
    if (std::isinf(wz_ratio) != is_2d())
      throw std::invalid_argument("dimension must be 2d exactly when wz_ratio is inf");
    if (hbar_omega0_meV && !(*hbar_omega0_meV > 0.0))
      throw std::invalid_argument("hbar_omega0_meV must be positive");
  }

  /// Typical GaAs dot (planar limit).
  static ModelParams gaas_2d() { return ModelParams{}; }

  static ModelParams three_d(double wz, double lam = 2.0) {
    ModelParams p;
    p.wz_ratio = wz;
    p.lambda = lam;
    p.dimension = Dimension::ThreeD;
    return p;
  }
};

struct FieldPoint {
  double wl_ratio = 0.0;  // omega_L / omega_0

  explicit FieldPoint(double wl = 0.0) : wl_ratio(wl) {
    if (!(wl >= 0.0)) throw std::invalid_argument("wl_ratio must be non-negative");
  }
};

/// Omega / omega_0 = sqrt(1 + (omega_L/omega_0)^2).
inline double effective_frequency(FieldPoint field) {
  return std::hypot(1.0, field.wl_ratio);
}

/// lambda_Omega = l_Omega / a*, the interaction strength relative to the effective confinement.
inline double effective_interaction(const ModelParams& params, FieldPoint field) {
  return params.lambda / std::sqrt(effective_frequency(field));
}

/// g* mu_B B M_S with mu_B B = (m*/m_e) hbar omega_L.
inline double zeeman_shift(const ModelParams& params, FieldPoint field, int M_S) {
  if (M_S < -1 || M_S > 1) throw std::invalid_argument("M_S must be -1, 0 or 1");
  return params.g_star * params.mass_ratio * field.wl_ratio * M_S;
}

/// Converts a scaled energy to meV. Requires hbar_omega0_meV.
inline double to_meV(const ModelParams& params, double energy) {
  if (!params.hbar_omega0_meV) throw std::invalid_argument("hbar_omega0_meV not set");
  return energy * *params.hbar_omega0_meV;
}

}  // namespace qdot

#endif  // QDOT_MODEL_HPP
