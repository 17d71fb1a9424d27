#ifndef QDOT_CHANNEL_HPP
#define QDOT_CHANNEL_HPP

// Relative-motion channels: H_rel at fixed relative m diagonalized in the relative
// Fock-Darwin (x vertical oscillator) basis.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "basis.hpp"
#include "coulomb.hpp"
#include "eigen.hpp"
#include "model.hpp"

namespace qdot {

/// Raised for numerical conditions the caller asked us to diagnose
/// (non-convergence, argmin at the scan edge, root outside the physical regime).
class NumericalDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Truncation {
  int nmax = 8;   // radial cutoff of the relative basis
  int nzmax = 0;  // vertical cutoff; only indices of the channel's z parity are used

  static Truncation defaults(Dimension dim) { return dim == Dimension::TwoD ? Truncation{8, 0} : Truncation{6, 6}; }
};

struct ChannelSpec {
  int m = 0;
  Truncation trunc{};
  int z_parity = 0;  // 0: even nz (the lowest states), 1: odd nz
  std::optional<double> basis_omega{};  // frequency of the radial basis; Omega when unset
};

struct RelBasisState {
  int n = 0;
  int nz = 0;
  bool operator==(const RelBasisState&) const = default;
};

struct RelSolution {
  int m = 0;
  std::vector<RelBasisState> basis;
  std::vector<double> energies;  // ascending
  Matrix b;                      // b(i, k): amplitude of basis[i] in eigenstate k
  Matrix hamiltonian;
  double max_residual = 0.0;

  std::size_t size() const { return energies.size(); }
  std::vector<double> state(std::size_t k) const { return b.column(k); }
};

inline std::vector<RelBasisState> rectangular_basis(const ChannelSpec& spec, Dimension dim) {
  if (spec.trunc.nmax < 0 || spec.trunc.nzmax < 0) throw std::invalid_argument("truncations must be >= 0");
  std::vector<RelBasisState> basis;
  for (int n = 0; n <= spec.trunc.nmax; ++n) {
    if (dim == Dimension::TwoD) {
      basis.push_back({n, 0});
      continue;
    }
    for (int nz = spec.z_parity; nz <= spec.trunc.nzmax; nz += 2) basis.push_back({n, nz});
  }
  // n-major order keeps (0, 0) first so the sign convention b_00 > 0 reads off entry 0.
  std::stable_sort(basis.begin(), basis.end(), [](auto a, auto b) { return a.n + a.nz < b.n + b.nz; });
  return basis;
}

/// Diagonalizes H_rel in an explicit basis. Energies include the vertical zero point
/// in 3D and exclude spin. A basis frequency different from Omega adds the residual
/// confinement (Omega^2 - w^2) rho^2 / 4, which is tridiagonal in n.
inline RelSolution solve_channel_basis(const std::vector<RelBasisState>& basis, int m, const ModelParams& params,
                                       FieldPoint field, const RelElementCache* cache = nullptr,
                                       std::optional<double> basis_omega = std::nullopt) {
  if (basis.empty()) throw std::invalid_argument("solve_channel: empty basis");
  const double omega = effective_frequency(field);
  const double w = basis_omega.value_or(omega);
  if (!(w > 0.0)) throw std::invalid_argument("basis frequency must be positive");
  const double omega_z = params.is_2d() ? kInf : params.wz_ratio;
  if (cache && cache->omega() != w) throw std::invalid_argument("element cache built for another frequency");
  RelElementCache local(w, omega_z);
  const RelElementCache& rel = cache ? *cache : local;

  const std::size_t dim = basis.size();
  const int am = std::abs(m);
  const double shift = (omega * omega - w * w) / (2.0 * w);  // (Omega^2 - w^2)/4 times rho^2 = 2/w units
  Matrix h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const int n = basis[i].n;
    h(i, i) = fd_energy({n, m}, w, field.wl_ratio) + shift * (2.0 * n + am + 1.0);
    if (!params.is_2d()) h(i, i) += z_energy({basis[i].nz}, omega_z);
    for (std::size_t j = 0; j < dim && shift != 0.0; ++j)
      if (basis[j].nz == basis[i].nz && basis[j].n == n + 1) {
        h(i, j) = h(j, i) = -shift * std::sqrt((n + 1.0) * (n + am + 1.0));
      }
  }
  if (params.lambda != 0.0) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) {
        const double v = params.lambda * rel(basis[i].n, basis[i].nz, basis[j].n, basis[j].nz, m);
        h(i, j) += v;
        if (j != i) h(j, i) += v;
      }
  }

  auto eig = jacobi_eigen(h);
  RelSolution sol{m, basis, std::move(eig.values), Matrix(dim, dim), h, 0.0};
  for (std::size_t k = 0; k < dim; ++k) {
    auto v = eig.vectors.column(k);
    fix_sign_first_nonzero(v);
    for (std::size_t i = 0; i < dim; ++i) sol.b(i, k) = v[i];
    sol.max_residual = std::max(sol.max_residual, residual(h, v, sol.energies[k]));
  }
  return sol;
}

inline RelSolution solve_channel(const ChannelSpec& spec, const ModelParams& params, FieldPoint field,
                                 const RelElementCache* cache = nullptr) {
  params.validate();
  return solve_channel_basis(rectangular_basis(spec, params.dimension), spec.m, params, field, cache,
                             spec.basis_omega);
}

/// Lowest relative state of channel m; throws when the truncation holds no state.
inline double lowest_rel_energy(int m, const ModelParams& params, FieldPoint field, Truncation trunc) {
  return solve_channel({m, trunc}, params, field).energies.front();
}

}  // namespace qdot

#endif  // QDOT_CHANNEL_HPP
