#ifndef QDOT_SPECTRA_HPP
#define QDOT_SPECTRA_HPP

// Total energies, ground-state segments, symmetrized IP blocks and addition energies.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "channel.hpp"
#include "coulomb.hpp"
#include "entangle.hpp"
#include "model.hpp"
#include "mosh.hpp"

namespace qdot {

/// CM energy, including the vertical zero point in 3D.
inline double cm_energy(Mode cm, const ModelParams& params, FieldPoint field) {
  double e = fd_energy({cm.n, cm.m}, effective_frequency(field), field.wl_ratio);
  if (!params.is_2d()) e += z_energy({cm.nz}, params.wz_ratio);
  return e;
}

struct LevelEnergy {
  int m = 0;
  int S = 0;
  int M_S = 0;
  double e_cm = 0.0;
  double e_rel = 0.0;
  double zeeman = 0.0;
  double total() const { return e_cm + e_rel + zeeman; }
};

/// Lowest level with CM in its ground state and relative motion in channel m.
inline LevelEnergy lowest_level(int m, const ModelParams& params, FieldPoint field, Truncation trunc) {
  const auto spin = lowest_state_spin(m);
  return {m, spin.S, spin.M_S, cm_energy({0, 0, 0}, params, field), lowest_rel_energy(m, params, field, trunc),
          zeeman_shift(params, field, spin.M_S)};
}

inline double lowest_total_energy(int m, const ModelParams& params, FieldPoint field, Truncation trunc) {
  return lowest_level(m, params, field, trunc).total();
}

/// Channel m minimizing the total energy over m in [0, m_max]; ties keep the smaller m.
inline int ground_channel(int m_max, const ModelParams& params, FieldPoint field, Truncation trunc) {
  int best = 0;
  double e_best = lowest_total_energy(0, params, field, trunc);
  for (int m = 1; m <= m_max; ++m) {
    const double e = lowest_total_energy(m, params, field, trunc);
    if (e < e_best) {
      e_best = e;
      best = m;
    }
  }
  return best;
}

struct GroundStateSegment {
  double wl_lo = 0.0;
  double wl_hi = 0.0;
  int m = 0;
  int S = 0;
  int M_S = 0;
  double measure_lo = 0.0;
  double measure_hi = 0.0;
};

struct ScanOptions {
  int m_max = 8;
  double boundary_tol = 1e-6;
  bool with_measures = true;
};

/// Piecewise-constant ground-state labeling over a sorted grid. Boundaries are refined
/// by bisection to boundary_tol. Throws NumericalDiagnostic when the minimum reaches m_max.
inline std::vector<GroundStateSegment> ground_state_scan(const std::vector<double>& wl_grid, const ModelParams& params,
                                                         Truncation trunc, ScanOptions opt = {}) {
  if (wl_grid.empty()) return {};
  if (!std::is_sorted(wl_grid.begin(), wl_grid.end())) throw std::invalid_argument("wl grid must be sorted");
  auto argmin = [&](double wl) {
    const int m = ground_channel(opt.m_max, params, FieldPoint(wl), trunc);
    if (m == opt.m_max)
      throw NumericalDiagnostic("ground-state scan reached m_max = " + std::to_string(opt.m_max) +
                                " at wl = " + std::to_string(wl) + "; raise m_max");
    return m;
  };

  std::vector<int> labels(wl_grid.size());
  for (std::size_t i = 0; i < wl_grid.size(); ++i) labels[i] = argmin(wl_grid[i]);

  std::vector<GroundStateSegment> segments;
  double lo = wl_grid.front();
  for (std::size_t i = 0; i + 1 <= wl_grid.size(); ++i) {
    const bool last = (i + 1 == wl_grid.size());
    if (!last && labels[i + 1] == labels[i]) continue;
    double hi = wl_grid[i];
    if (!last) {
      // Boundary of the segment labeled labels[i] inside (wl_grid[i], wl_grid[i+1]).
      double a = wl_grid[i], b = wl_grid[i + 1];
      while (b - a > opt.boundary_tol) {
        const double mid = 0.5 * (a + b);
        (argmin(mid) == labels[i] ? a : b) = mid;
      }
      hi = 0.5 * (a + b);
    }
    const auto spin = lowest_state_spin(labels[i]);
    segments.push_back({lo, hi, labels[i], spin.S, spin.M_S, 0.0, 0.0});
    lo = hi;
  }
  if (opt.with_measures) {
    for (auto& s : segments) {
      s.measure_lo = lowest_state_report(s.m, params, FieldPoint(s.wl_lo), trunc).measure;
      s.measure_hi = lowest_state_report(s.m, params, FieldPoint(s.wl_hi), trunc).measure;
    }
  }
  return segments;
}

struct IpBlockSolution {
  int M = 0;
  int sign = 1;
  int shell = 0;                          // largest total oscillator quanta kept
  std::vector<ProductState> basis;        // representative (first <= second) of each symmetrized pair
  std::vector<double> energies;           // ascending
  Matrix vectors;                         // column k over basis
  double max_residual = 0.0;

  /// Eigenstate k expanded over ordered IP products.
  CoeffMap<ProductState> state(std::size_t k) const {
    CoeffMap<ProductState> out;
    for (std::size_t i = 0; i < basis.size(); ++i) accumulate(out, symmetrize(basis[i], sign), vectors(i, k));
    prune(out);
    return out;
  }
};

/// Single-particle modes with at most `quanta` oscillator quanta.
inline std::vector<Mode> modes_up_to(int quanta, bool with_z) {
  std::vector<Mode> out;
  for (int q = 0; q <= quanta; ++q)
    for (int nz = 0; nz <= (with_z ? q : 0); ++nz)
      for (int n = 0; 2 * n <= q - nz; ++n) {
        const int am = q - nz - 2 * n;
        out.push_back({n, am, nz});
        if (am != 0) out.push_back({n, -am, nz});
      }
  std::sort(out.begin(), out.end());
  return out;
}

/// Symmetrized pairs {a, b}_sign with m_a + m_b = M and at most `shell` total quanta.
inline std::vector<ProductState> ip_block_basis(int M, int sign, int shell, bool with_z) {
  std::vector<ProductState> out;
  const auto modes = modes_up_to(shell, with_z);
  for (const auto& a : modes)
    for (const auto& b : modes) {
      if (b < a || a.m + b.m != M || a.quanta() + b.quanta() > shell) continue;
      if (sign < 0 && a == b) continue;
      out.push_back({a, b});
    }
  return out;
}

/// Orbital two-electron Hamiltonian on a symmetrized IP block. The block is truncated
/// by total oscillator quanta 2*nmax + |M|, which keeps it closed under the CM transform.
inline IpBlockSolution ip_block_solve(int M, int sign, int nmax, const ModelParams& params, FieldPoint field) {
  params.validate();
  if (M < 0) throw std::invalid_argument("ip_block_solve needs M >= 0");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (nmax < 0) throw std::invalid_argument("nmax must be >= 0");
  const double omega = effective_frequency(field);
  const double omega_z = params.is_2d() ? kInf : params.wz_ratio;
  IpBlockSolution sol;
  sol.M = M;
  sol.sign = sign;
  sol.shell = 2 * nmax + M;
  sol.basis = ip_block_basis(M, sign, sol.shell, !params.is_2d());
  const std::size_t d = sol.basis.size();
  if (d == 0) {
    sol.vectors = Matrix(0, 0);
    return sol;
  }

  // CM expansion of every basis vector grouped by (CM mode, relative m); V is diagonal there.
  using Group = std::map<std::pair<Mode, int>, std::vector<std::tuple<int, int, double>>>;
  std::vector<Group> groups(d);
  for (std::size_t i = 0; i < d; ++i)
    for (const auto& [k, v] : ip_to_cm(symmetrize(sol.basis[i], sign)))
      groups[i][{k.cm, k.rel.m}].emplace_back(k.rel.n, k.rel.nz, v);

  RelElementCache rel(omega, omega_z);
  Matrix h(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& [a, b] = sol.basis[i];
    h(i, i) = cm_energy(a, params, field) + cm_energy(b, params, field);
    if (params.lambda == 0.0) continue;
    for (std::size_t j = i; j < d; ++j) {
      double v = 0.0;
      for (const auto& [key, bra] : groups[i]) {
        auto it = groups[j].find(key);
        if (it == groups[j].end()) continue;
        for (const auto& [n, nz, cb] : bra)
          for (const auto& [np, nzp, ck] : it->second) v += cb * ck * rel(n, nz, np, nzp, key.second);
      }
      h(i, j) += params.lambda * v;
      if (j != i) h(j, i) += params.lambda * v;
    }
  }
  auto eig = jacobi_eigen(h);
  sol.energies = std::move(eig.values);
  sol.vectors = Matrix(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    auto v = eig.vectors.column(k);
    fix_sign_first_nonzero(v);
    for (std::size_t i = 0; i < d; ++i) sol.vectors(i, k) = v[i];
    sol.max_residual = std::max(sol.max_residual, residual(h, v, sol.energies[k]));
  }
  return sol;
}

/// Levels E_cm + E_rel of a symmetry block built from separate CM and relative solves.
/// With rel_trunc unset every relative channel is truncated to the same oscillator shell
/// as ip_block_solve(M, sign, nmax), which makes the two spectra identical.
inline std::vector<double> kohn_levels(int M, int sign, int nmax, const ModelParams& params, FieldPoint field,
                                       std::optional<Truncation> rel_trunc = std::nullopt) {
  const int shell = 2 * nmax + M;
  const bool with_z = !params.is_2d();
  std::vector<double> out;
  for (const auto& cm : modes_up_to(shell, with_z)) {
    const int m = M - cm.m;
    const int left = shell - cm.quanta();
    if (std::abs(m) > left) continue;
    // Exchange acts as (-1)^(m + nz) on the relative state.
    for (int zp = 0; zp <= (with_z ? 1 : 0); ++zp) {
      if (((std::abs(m) + zp) % 2 == 0 ? 1 : -1) != sign) continue;
      std::vector<RelBasisState> basis;
      if (rel_trunc) {
        basis = rectangular_basis({std::abs(m), *rel_trunc, zp}, params.dimension);
      } else {
        for (int nz = zp; nz <= (with_z ? left - std::abs(m) : 0); nz += 2)
          for (int n = 0; 2 * n + std::abs(m) + nz <= left; ++n) basis.push_back({n, nz});
      }
      if (basis.empty()) continue;
      const auto rel = solve_channel_basis(basis, m, params, field);
      const double ec = cm_energy(cm, params, field);
      for (double e : rel.energies) out.push_back(ec + e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct AdditionEnergy {
  double wl_ratio = 0.0;
  double e_a = 0.0;
  int m = 0;
  int M_S = 0;
  double e_rel = 0.0;
};

/// E_tot(2) - 2 E_tot(1), with the one-electron ground state at m_s = -1/2.
inline AdditionEnergy addition_energy(const ModelParams& params, FieldPoint field, Truncation trunc, int m_max = 8) {
  const int m = ground_channel(m_max, params, field, trunc);
  if (m == m_max) throw NumericalDiagnostic("addition energy: ground channel reached m_max");
  const auto level = lowest_level(m, params, field, trunc);
  const double omega = effective_frequency(field);
  double e1 = omega + params.g_star * params.mass_ratio * field.wl_ratio * (-0.5);
  if (!params.is_2d()) e1 += 0.5 * params.wz_ratio;
  return {field.wl_ratio, level.total() - 2.0 * e1, m, level.M_S, level.e_rel};
}

}  // namespace qdot

#endif  // QDOT_SPECTRA_HPP
