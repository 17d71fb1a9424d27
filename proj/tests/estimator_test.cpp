#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "qdot/basis.hpp"
#include "qdot/estimator.hpp"
#include "qdot/quadrature.hpp"

using namespace qdot;

namespace {

ModelParams planar(double lambda, double g = -0.44) {
  ModelParams p;
  p.lambda = lambda;
  p.g_star = g;
  return p;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0; lo + i * step <= hi + 1e-12; ++i) g.push_back(lo + i * step);
  return g;
}

}  // namespace

TEST(FFromErel, NoninteractingClosure) {
  for (double wl : {0.3, 1.0, 2.2}) {
    const double omega = effective_frequency(FieldPoint(wl));
    // E_rel = Omega (m + 1) - wl m, dE/dwl = (wl/Omega)(m + 1) - m
    for (int m = 0; m <= 3; ++m) {
      const double F = f_from_erel(wl, m, wl / omega * (m + 1) - m);
      EXPECT_NEAR(F, 0.0, 1e-14);
      EXPECT_NEAR(solve_b1(F, m).b1_sq, 0.0, 1e-14);
    }
  }
  EXPECT_THROW(f_from_erel(0.0, 0, 0.0), std::invalid_argument);
}

TEST(FFromEa, ConsistentWithRelativeRoute) {
  const auto p = planar(2.0);
  const Truncation t{8, 0};
  const double wl = 1.65, h = 1e-4;
  const auto a = addition_energy(p, FieldPoint(wl), t);
  const double dEa = (addition_energy(p, FieldPoint(wl + h), t).e_a - addition_energy(p, FieldPoint(wl - h), t).e_a) / (2 * h);
  const double dEr = (lowest_rel_energy(a.m, p, FieldPoint(wl + h), t) - lowest_rel_energy(a.m, p, FieldPoint(wl - h), t)) / (2 * h);
  EXPECT_NEAR(f_from_ea(wl, a.m, a.M_S, dEa, p.g_star, p.mass_ratio), f_from_erel(wl, a.m, dEr), 1e-8);
}

TEST(FFromEa, StationaryPointAndTrivialCase) {
  const double wl = 1.2, r = effective_frequency(FieldPoint(wl)) / wl;
  EXPECT_NEAR(f_from_ea(wl, 2, 0, 0.0, -0.44, 0.067), (1 - r) * 2 + r * (-0.44 * 0.067), 1e-15);
  EXPECT_EQ(f_from_ea(wl, 0, 0, 0.0, 0.0, 0.067), 0.0);
  EXPECT_THROW(f_from_ea(0.0, 0, 0, 0.0, 0.0, 0.067), std::invalid_argument);
}

TEST(SolveB1, RootSelection) {
  const auto z = solve_b1(0.0, 3);
  EXPECT_EQ(z.b1_sq, 0.0);
  EXPECT_EQ(z.b0, 1.0);
  // Smaller root of 2x^2 - 0.8x + 0.01.
  const auto r = solve_b1(0.2, 0);
  EXPECT_NEAR(r.b1_sq, (0.8 - std::sqrt(0.64 - 0.08)) / 4.0, 1e-15);
  EXPECT_NEAR(2 * r.b1_sq * r.b1_sq - 0.8 * r.b1_sq + 0.01, 0.0, 1e-15);
  EXPECT_NEAR(r.b0 * r.b0 + r.b1_sq, 1.0, 1e-15);
}

TEST(SolveB1, NegativeDiscriminantIsDiagnosed) {
  // (F - 1)^2 - 2F^2 < 0 for F = 0.5 at m = 0.
  EXPECT_THROW(solve_b1(0.5, 0), NumericalDiagnostic);
}

TEST(SolveB1, ContinuousInF) {
  double prev = solve_b1(0.0, 2).b1_sq;
  for (int i = 1; i <= 100; ++i) {
    const double cur = solve_b1(0.002 * i, 2).b1_sq;
    EXPECT_LT(std::fabs(cur - prev), 1e-3);
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(FirstOrderMeasure, ReducesToClosedForm) {
  for (int m = 0; m <= 5; ++m) EXPECT_NEAR(first_order_measure(m, 1.0, 0.0), closed_form_lowest(m), 1e-15);
  EXPECT_THROW(first_order_measure(2, 0.9, 0.5), std::invalid_argument);
}

TEST(FirstOrderMeasure, BenchmarkFromRelativeSlope) {
  const auto p = planar(2.0);
  const Truncation t{8, 0};
  const double wl = 1.65, h = 1e-4;
  const double dEr = (lowest_rel_energy(2, p, FieldPoint(wl + h), t) - lowest_rel_energy(2, p, FieldPoint(wl - h), t)) / (2 * h);
  const auto b = solve_b1(f_from_erel(wl, 2, dEr), 2);
  EXPECT_NEAR(first_order_measure(2, b.b0, b.b1_sq), 0.6261, 5e-4);
}

TEST(MeanRhoSq, BasisGroundState) {
  const std::vector<RelBasisState> basis{{0, 0}, {1, 0}};
  for (int m = 0; m <= 3; ++m) {
    const auto r = mean_rho12_sq(basis, {1.0, 0.0}, m, 1.4);
    EXPECT_NEAR(r.general, 2.0 / 1.4 * (m + 1), 1e-14);
    EXPECT_NEAR(r.two_term, r.general, 1e-14);
  }
}

TEST(MeanRhoSq, GeneralFormulaMatchesQuadrature) {
  const auto p = planar(2.0);
  const FieldPoint f(0.0);
  const auto sol = solve_channel({0, {8, 0}}, p, f);
  const auto b = sol.state(0);
  const double omega = effective_frequency(f);
  const auto rule = gauss_legendre(400);
  const double rmax = 40.0;
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double rho = 0.5 * rmax * (rule.nodes[i] + 1.0);
    double psi = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k)
      psi += b[k] * std::real(fd_eval({sol.basis[k].n, 0}, Role::Relative, omega, rho, 0.0));
    s += 0.5 * rmax * rule.weights[i] * 2.0 * std::numbers::pi * rho * rho * rho * psi * psi;
  }
  EXPECT_NEAR(mean_rho12_sq(sol.basis, b, 0, omega).general, s, 1e-8);
}

TEST(MeanRhoSq, HellmannFeynmanWithFixedBasis) {
  for (double lam : {0.5, 2.0}) {
    const auto p = planar(lam);
    for (double wl : {0.4, 1.3, 2.5})
      for (int m : {0, 1, 3}) {
        const double w = effective_frequency(FieldPoint(wl)), h = 1e-4;
        ChannelSpec s{m, {8, 0}, 0, w};
        const double d =
            (solve_channel(s, p, FieldPoint(wl + h)).energies[0] - solve_channel(s, p, FieldPoint(wl - h)).energies[0]) /
            (2 * h);
        const auto sol = solve_channel(s, p, FieldPoint(wl));
        const double hf = 0.5 * wl * mean_rho12_sq(sol.basis, sol.state(0), m, w).general - m;
        EXPECT_NEAR(d, hf, 1e-6);
      }
  }
}

TEST(Curve, CsvRoundTripAndErrors) {
  std::istringstream in("wl_ratio,E_a,m,M_S\n0.1,1.5,0,0\n0.2,1.4,1,1\n");
  const auto c = read_curve_csv(in);
  ASSERT_EQ(c.samples.size(), 2u);
  EXPECT_EQ(c.samples[1].M_S, 1);
  EXPECT_EQ(c.source, CurveSource::File);
  std::istringstream bad_header("wl,E,m,M\n");
  EXPECT_THROW(read_curve_csv(bad_header), std::invalid_argument);
  std::istringstream bad_cell("wl_ratio,E_a,m,M_S\n0.1,abc,0,0\n");
  EXPECT_THROW(read_curve_csv(bad_cell), std::invalid_argument);
  std::istringstream unsorted("wl_ratio,E_a,m,M_S\n0.2,1,0,0\n0.1,1,0,0\n");
  EXPECT_THROW(read_curve_csv(unsorted), std::invalid_argument);
}

TEST(EstimateCurve, SkipsSegmentEdgesAndReportsShortSegments) {
  AdditionCurve c;
  for (int i = 0; i < 5; ++i) c.samples.push_back({0.1 * (i + 1), 1.0, 0, 0});
  c.samples.push_back({0.6, 1.0, 1, 1});
  const auto rep = estimate_curve(c, planar(2.0, 0.0));
  EXPECT_EQ(rep.results.size(), 3u);
  EXPECT_EQ(rep.notes.size(), 1u);
}

TEST(EstimateCurve, BenchmarkSegment) {
  const auto p = planar(2.0);
  const auto curve = simulate_curve(p, grid(1.5, 1.8, 0.01), {8, 0});
  const auto rep = estimate_curve(curve, p);
  bool found = false;
  for (const auto& r : rep.results) {
    if (r.m != 2) continue;
    const double exact = lowest_state_report(2, p, FieldPoint(r.wl_ratio), {8, 0}).measure;
    EXPECT_NEAR(r.measure_1st, exact, 5e-3);
    EXPECT_LE(std::fabs(r.measure_1st - exact), std::fabs(r.measure_0th - exact));
    if (std::fabs(r.wl_ratio - 1.65) < 1e-9) {
      found = true;
      EXPECT_NEAR(r.measure_1st, 0.6261, 5e-4);
      EXPECT_EQ(r.measure_0th, 0.625);
    }
  }
  EXPECT_TRUE(found);
}

TEST(EstimateCurve, IndependentOfGFactorViaRelativeRoute) {
  const Truncation t{8, 0};
  const double wl = 1.65, h = 1e-4;
  double F[2];
  int i = 0;
  for (double g : {-0.44, 0.0}) {
    const auto p = planar(2.0, g);
    const double dEr = (lowest_rel_energy(2, p, FieldPoint(wl + h), t) - lowest_rel_energy(2, p, FieldPoint(wl - h), t)) / (2 * h);
    F[i++] = f_from_erel(wl, 2, dEr);
  }
  EXPECT_EQ(F[0], F[1]);
}
