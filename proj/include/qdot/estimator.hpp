#ifndef QDOT_ESTIMATOR_HPP
#define QDOT_ESTIMATOR_HPP

// Entanglement of the lowest states reconstructed from the field dependence of the
// addition energy, using a two-term relative wave function b0 |0,m> + b1 |1,m>.

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "entangle.hpp"
#include "model.hpp"
#include "spectra.hpp"

namespace qdot {

/// F from the relative-energy slope. Singular at wl = 0.
inline double f_from_erel(double wl, int m, double dErel_dwl) {
  if (!(wl > 0.0)) throw std::invalid_argument("F needs wl > 0");
  const double r = effective_frequency(FieldPoint(wl)) / wl;
  return 1.0 + (1.0 - r) * m - r * dErel_dwl;
}

/// F from the addition-energy slope of a segment with labels (m, M_S).
inline double f_from_ea(double wl, int m, int M_S, double dEa_dwl, double g_star, double mass_ratio) {
  if (!(wl > 0.0)) throw std::invalid_argument("F needs wl > 0");
  const double r = effective_frequency(FieldPoint(wl)) / wl;
  return (1.0 - r) * m + r * (g_star * mass_ratio * (M_S + 1) - dEa_dwl);
}

struct B1Solution {
  double b1_sq = 0.0;
  double b0 = 1.0;
};

/// Smaller root of (m+2) x^2 + (F-m-1) x + F^2/4 = 0 for x = b1^2, with b0 = sqrt(1 - b1^2).
inline B1Solution solve_b1(double F, int m) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  const double disc = (F - m - 1.0) * (F - m - 1.0) - (m + 2.0) * F * F;
  if (disc < 0.0) throw NumericalDiagnostic("outside first-order regime: negative discriminant");
  const double x = ((m + 1.0 - F) - std::sqrt(disc)) / (2.0 * (m + 2.0));
  if (x < -1e-14 || x >= 1.0) throw NumericalDiagnostic("outside first-order regime: b1^2 not in [0, 1)");
  const double b1_sq = std::max(x, 0.0);
  return {b1_sq, std::sqrt(1.0 - b1_sq)};
}

inline double first_order_measure(int m, double b0, double b1_sq) {
  if (std::fabs(b0 * b0 + b1_sq - 1.0) > 1e-10) throw std::invalid_argument("b0^2 + b1^2 must equal 1");
  const double i0 = integral_I(0, 0, 0, 0, m);
  const double i1 = integral_I(0, 0, 1, 1, m);
  const double spin = (m % 2 == 0) ? 1.0 : 2.0;
  return 1.0 - spin * (i0 * b0 * b0 * b0 * b0 + i1 * (4.0 * b0 * b0 + b1_sq) * b1_sq);
}

struct MeanRhoSq {
  double general = 0.0;
  double two_term = 0.0;
};

/// <rho12^2> of a relative state; the two-term value keeps only the (0, 0) and (1, 0) amplitudes.
inline MeanRhoSq mean_rho12_sq(const std::vector<RelBasisState>& basis, const std::vector<double>& b, int m,
                               double omega) {
  if (basis.size() != b.size()) throw std::invalid_argument("basis and coefficient sizes differ");
  const int am = std::abs(m);
  const double scale = 2.0 / omega;
  double g = 0.0, b0 = 0.0, b1 = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto [n, nz] = basis[i];
    if (nz == 0 && n == 0) b0 = b[i];
    if (nz == 0 && n == 1) b1 = b[i];
    g += b[i] * b[i] * (2.0 * n + am + 1.0);
    for (std::size_t j = 0; j < b.size(); ++j)
      if (basis[j].nz == nz && basis[j].n == n + 1) g -= 2.0 * b[i] * b[j] * std::sqrt((n + 1.0) * (n + am + 1.0));
  }
  const double two = am + 1.0 - 2.0 * b0 * b1 * std::sqrt(am + 1.0) + 2.0 * b1 * b1;
  return {scale * g, scale * two};
}

struct AdditionSample {
  double wl_ratio = 0.0;
  double e_a = 0.0;
  int m = 0;
  int M_S = 0;
};

enum class CurveSource { Simulated, File };

struct AdditionCurve {
  std::vector<AdditionSample> samples;
  CurveSource source = CurveSource::File;

  void validate() const {
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (!(samples[i].wl_ratio > samples[i - 1].wl_ratio)) throw std::invalid_argument("wl must increase strictly");
  }
};

inline AdditionCurve simulate_curve(const ModelParams& params, const std::vector<double>& wl_grid, Truncation trunc,
                                    int m_max = 8) {
  AdditionCurve curve{{}, CurveSource::Simulated};
  for (double wl : wl_grid) {
    const auto a = addition_energy(params, FieldPoint(wl), trunc, m_max);
    curve.samples.push_back({wl, a.e_a, a.m, a.M_S});
  }
  curve.validate();
  return curve;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace detail

/// Reads `wl_ratio,E_a,m,M_S` with a header row.
inline AdditionCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty addition-energy CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "wl_ratio,E_a,m,M_S") throw std::invalid_argument("unexpected CSV header: " + line);
  AdditionCurve curve{{}, CurveSource::File};
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 4) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 4 columns");
    try {
      curve.samples.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stoi(cells[2]), std::stoi(cells[3])});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  curve.validate();
  return curve;
}

struct EstimateResult {
  double wl_ratio = 0.0;
  int m = 0;
  int M_S = 0;
  double F = 0.0;
  double b1_sq = 0.0;
  double b0 = 1.0;
  double measure_0th = 0.0;
  double measure_1st = 0.0;
};

struct EstimateReport {
  std::vector<EstimateResult> results;
  std::vector<std::string> notes;  // skipped segments and samples
  int diagnostics = 0;             // samples outside the first-order regime
};

/// Estimates at every sample with both neighbours in its (m, M_S) segment; the edge
/// samples of a segment, where the slope jumps, are dropped.
inline EstimateReport estimate_curve(const AdditionCurve& curve, const ModelParams& params) {
  curve.validate();
  EstimateReport report;
  const auto& s = curve.samples;
  std::size_t begin = 0;
  while (begin < s.size()) {
    std::size_t end = begin + 1;
    while (end < s.size() && s[end].m == s[begin].m && s[end].M_S == s[begin].M_S) ++end;
    if (end - begin < 3) {
      std::ostringstream os;
      os << "segment m=" << s[begin].m << " M_S=" << s[begin].M_S << " at wl=" << s[begin].wl_ratio
         << " has fewer than 3 samples";
      report.notes.push_back(os.str());
    }
    for (std::size_t i = begin + 1; i + 1 < end; ++i) {
      const auto& p = s[i];
      if (!(p.wl_ratio > 0.0)) continue;
      const double slope = (s[i + 1].e_a - s[i - 1].e_a) / (s[i + 1].wl_ratio - s[i - 1].wl_ratio);
      const double F = f_from_ea(p.wl_ratio, p.m, p.M_S, slope, params.g_star, params.mass_ratio);
      try {
        const auto b = solve_b1(F, p.m);
        report.results.push_back({p.wl_ratio, p.m, p.M_S, F, b.b1_sq, b.b0, closed_form_lowest(p.m),
                                  first_order_measure(p.m, b.b0, b.b1_sq)});
      } catch (const NumericalDiagnostic& e) {
        ++report.diagnostics;
        std::ostringstream os;
        os << "wl=" << p.wl_ratio << ": " << e.what();
        report.notes.push_back(os.str());
      }
    }
    begin = end;
  }
  return report;
}

}  // namespace qdot

#endif  // QDOT_ESTIMATOR_HPP
