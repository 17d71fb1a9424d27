#ifndef QDOT_PTLIMIT_HPP
#define QDOT_PTLIMIT_HPP

// First-order degenerate perturbation theory in the Coulomb strength on the
// noninteracting level E_M^(0), spanned by the n1 = n2 = 0 products with m1 + m2 = M.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "coulomb.hpp"
#include "eigen.hpp"
#include "entangle.hpp"
#include "mosh.hpp"

namespace qdot {

struct DegenerateSubspace {
  int M = 0;
  int sign = 1;
  std::vector<ProductState> basis;  // u_k = {Phi_{0,M-k+1}, Phi_{0,k-1}}_sign, k = 1, 2, ...

  std::size_t dim() const { return basis.size(); }
  CoeffMap<ProductState> vector(std::size_t k) const { return symmetrize(basis.at(k), sign); }
};

/// Expected dimension [M/2] + 1/2 + sign^(M+1)/2.
inline int subspace_dimension(int M, int sign) {
  const int s = ((M + 1) % 2 == 0 || sign > 0) ? 1 : -1;
  return M / 2 + (1 + s) / 2;
}

inline DegenerateSubspace subspace(int M, int sign) {
  if (M < 0) throw std::invalid_argument("subspace needs M >= 0");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  DegenerateSubspace s{M, sign, {}};
  for (int m2 = 0; 2 * m2 <= M; ++m2) {
    const ProductState u{{0, M - m2, 0}, {0, m2, 0}};
    if (sign < 0 && u.first == u.second) continue;
    s.basis.push_back(u);
  }
  return s;
}

struct PTResult {
  DegenerateSubspace space;
  Matrix V;                                // <u_i| 1/r12 |u_j>
  std::vector<double> deltaE;              // eigenvalues of V: first-order shifts per unit lambda
  std::vector<std::vector<double>> vectors;  // coefficients over u_k, first nonzero entry positive

  CoeffMap<ProductState> state(std::size_t k) const {
    CoeffMap<ProductState> out;
    for (std::size_t i = 0; i < space.dim(); ++i) accumulate(out, space.vector(i), vectors.at(k)[i]);
    prune(out);
    return out;
  }
};

/// Diagonalizes the Coulomb matrix on the (M, sign) subspace at effective frequency omega.
inline PTResult solve_pt(int M, int sign, double omega = 1.0) {
  PTResult r{subspace(M, sign), Matrix(0, 0), {}, {}};
  const std::size_t d = r.space.dim();
  if (d == 0) throw std::invalid_argument("solve_pt: empty subspace");
  RelElementCache rel(omega, kInf);
  r.V = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) r.V(i, j) = r.V(j, i) = ip_element(r.space.vector(i), r.space.vector(j), rel);
  const auto eig = jacobi_eigen(r.V);
  r.deltaE = eig.values;
  for (std::size_t k = 0; k < d; ++k) {
    auto v = eig.vectors.column(k);
    fix_sign_first_nonzero(v);
    r.vectors.push_back(std::move(v));
  }
  return r;
}

struct LimitRow {
  std::string label;
  int M = 0;
  int sign = 1;
  std::vector<double> coefficients;  // over the subspace basis
  CoeffMap<ProductState> ip;         // over ordered products
  CmRelState cm;                     // Phi^cm_{0,m_cm} Phi^rel_{0,m}
  double overlap = 0.0;              // <cm state | PT state>, +-1 when they coincide
  double trace_orb = 0.0;
  int S = 0;
  std::vector<int> M_S;
  std::vector<double> trace_spin;
  std::vector<double> measure;
};

/// One row per PT eigenvector of E_M^(0), matched to the CM x relative shell state it equals.
inline std::vector<LimitRow> limit_state_table(int M) {
  std::vector<LimitRow> rows;
  for (int sign : {1, -1}) {
    if (subspace_dimension(M, sign) == 0) continue;
    const auto pt = solve_pt(M, sign);
    const std::size_t d = pt.space.dim();
    for (std::size_t k = 0; k < d; ++k) {
      LimitRow row;
      row.M = M;
      row.sign = sign;
      row.label = "psi^(" + std::to_string(M) + "," + (sign > 0 ? "+" : "-") + ")";
      if (d == 2) row.label += (k == 0 ? "_<" : "_>");
      else if (d > 2) row.label += "_" + std::to_string(k + 1);
      row.coefficients = pt.vectors[k];
      row.ip = pt.state(k);
      for (int m = 0; m <= M; ++m) {
        if ((m % 2 == 0 ? 1 : -1) != sign) continue;
        const CmRelState cm{{0, M - m, 0}, {0, m, 0}};
        const double ov = inner(cm_to_ip(cm), row.ip);
        if (std::fabs(ov) > std::fabs(row.overlap)) {
          row.overlap = ov;
          row.cm = cm;
        }
      }
      row.trace_orb = orbital_trace_matrix(row.ip);
      row.S = sign > 0 ? 0 : 1;
      row.M_S = sign > 0 ? std::vector<int>{0} : std::vector<int>{0, 1};
      for (int ms : row.M_S) {
        row.trace_spin.push_back(spin_trace(ms));
        row.measure.push_back(linear_entropy_measure(row.trace_orb, spin_trace(ms)));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace qdot

#endif  // QDOT_PTLIMIT_HPP
