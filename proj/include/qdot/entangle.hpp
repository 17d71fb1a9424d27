#ifndef QDOT_ENTANGLE_HPP
#define QDOT_ENTANGLE_HPP

// Linear-entropy entanglement of two-electron states:
//   measure = 1 - 2 Tr(rho_orb^2) Tr(rho_spin^2).

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "channel.hpp"
#include "eigen.hpp"
#include "mosh.hpp"

namespace qdot {

enum class Method { IpDiagonal, CmIJ, MatrixTrace, ClosedForm, FirstOrder };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::IpDiagonal: return "IpDiagonal";
    case Method::CmIJ: return "CmIJ";
    case Method::MatrixTrace: return "MatrixTrace";
    case Method::ClosedForm: return "ClosedForm";
    case Method::FirstOrder: return "FirstOrder";
  }
  return "unknown";
}

struct EntanglementReport {
  double trace_orb = 1.0;
  double trace_spin = 0.5;
  double measure = 0.0;
  Method method = Method::CmIJ;
};

/// Measure from the two traces; round-off below zero is clamped.
inline double linear_entropy_measure(double trace_orb, double trace_spin) {
  const double e = 1.0 - 2.0 * trace_orb * trace_spin;
  return (e < 0.0 && e > -1e-12) ? 0.0 : e;
}

inline double spin_trace(int M_S) {
  if (M_S < -1 || M_S > 1) throw std::invalid_argument("M_S must be -1, 0 or 1");
  return (1.0 + std::abs(M_S)) / 2.0;
}

struct SpinLabels {
  int S = 0;
  int M_S = 0;
  double trace = 0.5;
};

/// Spin of the lowest state in relative channel m: singlet for even m, M_S = 1 triplet for odd m.
inline SpinLabels lowest_state_spin(int m) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  const int s = (m % 2 == 0) ? 0 : 1;
  return {s, s, spin_trace(s)};
}

inline EntanglementReport make_report(double trace_orb, int M_S, Method method) {
  const double ts = spin_trace(M_S);
  return {trace_orb, ts, linear_entropy_measure(trace_orb, ts), method};
}

/// Sum of a_k^4 for coefficients on product states whose reduced density matrix is diagonal.
inline double orbital_trace_ip(const std::vector<double>& a) {
  double n2 = 0.0, n4 = 0.0;
  for (double x : a) {
    n2 += x * x;
    n4 += x * x * x * x;
  }
  if (std::fabs(n2 - 1.0) > 1e-10) throw std::invalid_argument("orbital_trace_ip: coefficients not normalized");
  return n4;
}

namespace detail {

/// Dense C(a, b) over the single-particle modes that occur in either slot.
inline Matrix coefficient_matrix(const CoeffMap<ProductState>& c) {
  std::map<Mode, std::size_t> index;
  for (const auto& [k, v] : c) {
    index.emplace(k.first, 0);
    index.emplace(k.second, 0);
  }
  std::size_t i = 0;
  for (auto& [mode, idx] : index) idx = i++;
  Matrix out(index.size(), index.size());
  for (const auto& [k, v] : c) out(index[k.first], index[k.second]) += v;
  return out;
}

inline void require_normalized(const CoeffMap<ProductState>& c) {
  if (std::fabs(norm_squared(c) - 1.0) > 1e-10) throw std::invalid_argument("state not normalized");
}

}  // namespace detail

/// Tr(rho^2) with rho = C C^T, the orbital density matrix of particle 1.
inline double orbital_trace_matrix(const CoeffMap<ProductState>& c) {
  detail::require_normalized(c);
  const Matrix cm = detail::coefficient_matrix(c);
  const Matrix rho = cm * cm.transpose();
  double s = 0.0;
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j) s += rho(i, j) * rho(i, j);
  return s;
}

/// Sum of p_k^2 over the eigenvalues of rho: the diagonal form in the natural-orbital basis.
inline double orbital_trace_schmidt(const CoeffMap<ProductState>& c) {
  detail::require_normalized(c);
  const Matrix cm = detail::coefficient_matrix(c);
  const auto eig = jacobi_eigen(cm * cm.transpose());
  double s = 0.0;
  for (double p : eig.values) s += p * p;
  return s;
}

namespace detail {

inline double contract4(const Matrix& c1, const Matrix& c2, const Matrix& c3, const Matrix& c4) {
  return (c1 * c2.transpose() * c4 * c3.transpose()).trace();
}

/// Coefficient matrices over a shared mode index for the listed CM x relative states.
inline std::vector<Matrix> shared_matrices(const std::vector<CmRelState>& states) {
  std::vector<CoeffMap<ProductState>> maps;
  std::map<Mode, std::size_t> index;
  for (const auto& s : states) {
    maps.push_back(cm_to_ip(s));
    for (const auto& [k, v] : maps.back()) {
      index.emplace(k.first, 0);
      index.emplace(k.second, 0);
    }
  }
  std::size_t i = 0;
  for (auto& [mode, idx] : index) idx = i++;
  std::vector<Matrix> out;
  for (const auto& c : maps) {
    Matrix mat(index.size(), index.size());
    for (const auto& [k, v] : c) mat(index[k.first], index[k.second]) = v;
    out.push_back(std::move(mat));
  }
  return out;
}

template <class Key>
class Memo {
 public:
  template <class F>
  double get(const Key& key, F&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) return it->second;
    }
    const double v = compute();
    std::unique_lock lock(mutex_);
    table_.emplace(key, v);
    return v;
  }

 private:
  std::map<Key, double> table_;
  std::shared_mutex mutex_;
};

}  // namespace detail

/// In-plane overlap integral of four relative states Phi^rel_{n_i,m} sharing the CM ground state.
/// Independent of the confinement.
inline double integral_I(int n1, int n2, int n3, int n4, int m) {
  if (n1 < 0 || n2 < 0 || n3 < 0 || n4 < 0 || m < 0) throw std::invalid_argument("integral_I: negative index");
  if (n1 + n4 != n2 + n3) return 0.0;
  static detail::Memo<std::tuple<int, int, int, int, int>> memo;
  return memo.get({n1, n2, n3, n4, m}, [&] {
    const Mode cm{0, 0, 0};
    const auto c = detail::shared_matrices({{cm, {n1, m, 0}}, {cm, {n2, m, 0}}, {cm, {n3, m, 0}}, {cm, {n4, m, 0}}});
    return detail::contract4(c[0], c[1], c[2], c[3]);
  });
}

/// Vertical analogue of integral_I.
inline double integral_J(int nz1, int nz2, int nz3, int nz4) {
  if (nz1 < 0 || nz2 < 0 || nz3 < 0 || nz4 < 0) throw std::invalid_argument("integral_J: negative index");
  if (nz1 + nz4 != nz2 + nz3) return 0.0;
  static detail::Memo<std::tuple<int, int, int, int>> memo;
  return memo.get({nz1, nz2, nz3, nz4}, [&] {
    const Mode cm{0, 0, 0};
    const auto c = detail::shared_matrices({{cm, {0, 0, nz1}}, {cm, {0, 0, nz2}}, {cm, {0, 0, nz3}}, {cm, {0, 0, nz4}}});
    return detail::contract4(c[0], c[1], c[2], c[3]);
  });
}

/// Phi^cm_{0,0}(R) psi_rel(r12) expanded over IP products.
inline CoeffMap<ProductState> assemble_ip_state(const std::vector<RelBasisState>& basis, const std::vector<double>& b,
                                                int m) {
  if (basis.size() != b.size()) throw std::invalid_argument("basis and coefficient sizes differ");
  CoeffMap<ProductState> out;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0.0) accumulate(out, cm_to_ip(CmRelState{{0, 0, 0}, {basis[i].n, m, basis[i].nz}}), b[i]);
  prune(out);
  return out;
}

/// Tr(rho^2) from relative coefficients via the I and J integrals.
inline double orbital_trace_cm(const std::vector<RelBasisState>& basis, const std::vector<double>& b, int m) {
  if (basis.size() != b.size()) throw std::invalid_argument("basis and coefficient sizes differ");
  double n2 = 0.0;
  for (double x : b) n2 += x * x;
  if (std::fabs(n2 - 1.0) > 1e-10) throw std::invalid_argument("orbital_trace_cm: coefficients not normalized");
  const std::size_t d = b.size();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        const double bijk = b[i] * b[j] * b[k];
        if (bijk == 0.0) continue;
        for (std::size_t l = 0; l < d; ++l) {
          const auto &p = basis[i], &q = basis[j], &r = basis[k], &t = basis[l];
          if (p.n + t.n != q.n + r.n || p.nz + t.nz != q.nz + r.nz) continue;
          const double ij = integral_I(p.n, q.n, r.n, t.n, m) * integral_J(p.nz, q.nz, r.nz, t.nz);
          s += bijk * b[l] * ij;
        }
      }
  return s;
}

/// (2m)! / (2^m m!)^2, the value of I(0,0,0,0;m).
inline double lowest_orbital_trace(int m) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  double i0 = 1.0;
  for (int k = 1; k <= m; ++k) i0 *= (2.0 * k - 1.0) / (2.0 * k);
  return i0;
}

/// Lowest-state measure of noninteracting electrons in relative channel m.
inline double closed_form_lowest(int m) {
  return 1.0 - ((m % 2 == 0) ? 1.0 : 2.0) * lowest_orbital_trace(m);
}

/// Orbital trace of a relative eigenvector by the requested route.
inline double orbital_trace(const std::vector<RelBasisState>& basis, const std::vector<double>& b, int m,
                            Method method) {
  switch (method) {
    case Method::CmIJ: return orbital_trace_cm(basis, b, m);
    case Method::MatrixTrace: return orbital_trace_matrix(assemble_ip_state(basis, b, m));
    case Method::IpDiagonal: return orbital_trace_schmidt(assemble_ip_state(basis, b, m));
    default: throw std::invalid_argument("orbital_trace: method needs a closed form or estimator");
  }
}

/// Entanglement of the k-th state in channel m (lowest-state spin labels).
inline EntanglementReport channel_report(const RelSolution& sol, std::size_t k = 0, Method method = Method::CmIJ) {
  const auto spin = lowest_state_spin(sol.m);
  return make_report(orbital_trace(sol.basis, sol.state(k), sol.m, method), spin.M_S, method);
}

inline EntanglementReport lowest_state_report(int m, const ModelParams& params, FieldPoint field, Truncation trunc,
                                              Method method = Method::CmIJ) {
  if (method == Method::ClosedForm) {
    return make_report(lowest_orbital_trace(m), lowest_state_spin(m).M_S, method);
  }
  return channel_report(solve_channel({m, trunc}, params, field), 0, method);
}

}  // namespace qdot

#endif  // QDOT_ENTANGLE_HPP
