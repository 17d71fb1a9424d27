#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qdot/basis.hpp"
#include "qdot/model.hpp"
#include "qdot/quadrature.hpp"

using namespace qdot;

namespace {

/// <a|b> over the plane; the angular integral is 2 pi delta_{m,m'}, the radial one uses
/// Gauss-Laguerre in t = w rho^2.
std::complex<double> overlap(Mode2D a, Mode2D b, Role role, double omega) {
  if (a.m != b.m) return 0.0;
  const double w = role_scale(role) * omega;
  const auto rule = gauss_laguerre(64, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    const double rho = std::sqrt(t / w);
    const auto fa = fd_eval(a, role, omega, rho, 0.0), fb = fd_eval(b, role, omega, rho, 0.0);
    // d^2r = rho d rho d phi = dt d phi / (2w)
    s += rule.weights[i] * std::exp(t) * std::real(std::conj(fa) * fb) * std::numbers::pi / w;
  }
  return s;
}

}  // namespace

TEST(FdEnergy, Values) {
  EXPECT_DOUBLE_EQ(fd_energy({0, 0}, 1.0, 0.0), 1.0);
  EXPECT_NEAR(fd_energy({0, 1}, effective_frequency(FieldPoint(1.65)), 1.65), 2.208756, 1e-6);
  EXPECT_DOUBLE_EQ(fd_energy({1, -2}, 1.0, 0.5), 6.0);
}

TEST(FdEnergy, ShellDegeneracyAtZeroField) {
  for (int q = 0; q <= 8; ++q)
    for (int n = 0; 2 * n <= q; ++n) {
      EXPECT_DOUBLE_EQ(fd_energy({n, q - 2 * n}, 1.3, 0.0), 1.3 * (q + 1));
      EXPECT_DOUBLE_EQ(fd_energy({n, -(q - 2 * n)}, 1.3, 0.0), 1.3 * (q + 1));
    }
}

TEST(ZEnergy, ValuesAndPlanarGuard) {
  EXPECT_DOUBLE_EQ(z_energy({0}, 5.0), 2.5);
  EXPECT_DOUBLE_EQ(z_energy({2}, 2.0), 5.0);
  EXPECT_THROW(z_energy({0}, kInf), std::invalid_argument);
  EXPECT_THROW(z_eval({0}, Role::Single, kInf, 0.0), std::invalid_argument);
}

TEST(FdEval, GaussianPeak) {
  EXPECT_NEAR(std::real(fd_eval({0, 0}, Role::Single, 1.0, 0.0, 0.0)), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(std::real(fd_eval({0, 0}, Role::Single, 1.0, 0.0, 0.0)), 0.564190, 1e-6);
}

TEST(FdEval, NormalizationByQuadrature) {
  EXPECT_NEAR(std::real(overlap({1, 2}, {1, 2}, Role::Single, 1.0)), 1.0, 1e-12);
  EXPECT_NEAR(std::real(overlap({0, 1}, {1, 1}, Role::Single, 1.0)), 0.0, 1e-12);
}

TEST(FdEval, OrthonormalShellsUpToEight) {
  for (Role role : {Role::Single, Role::CenterOfMass, Role::Relative})
    for (int q = 0; q <= 8; ++q)
      for (int n = 0; 2 * n <= q; ++n)
        for (int qp = 0; qp <= 8; ++qp)
          for (int np = 0; 2 * np <= qp; ++np) {
            const Mode2D a{n, q - 2 * n}, b{np, qp - 2 * np};
            if (a.m != b.m) continue;
            EXPECT_NEAR(std::real(overlap(a, b, role, 1.7)), a == b ? 1.0 : 0.0, 1e-12);
          }
}

TEST(FdEval, ParityUnderRotationByPi) {
  for (int m = -3; m <= 3; ++m) {
    const auto a = fd_eval({1, m}, Role::Single, 1.2, 0.7, 0.4);
    const auto b = fd_eval({1, m}, Role::Single, 1.2, 0.7, 0.4 + std::numbers::pi);
    EXPECT_NEAR(std::abs(b - ((m % 2 == 0) ? 1.0 : -1.0) * a), 0.0, 1e-14);
  }
}

TEST(FdEval, PositiveNearOrigin) {
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 4; ++m) EXPECT_GT(std::real(fd_eval({n, m}, Role::Single, 1.0, 1e-3, 0.0)), 0.0);
}

TEST(FdEval, RoleScalingIdentity) {
  for (double rho : {0.0, 0.3, 1.1})
    EXPECT_NEAR(std::abs(fd_eval({1, 2}, Role::CenterOfMass, 1.5, rho, 0.2) -
                         fd_eval({1, 2}, Role::Single, 3.0, rho, 0.2)),
                0.0, 1e-15);
}

TEST(ZEval, OddParityAndNormalization) {
  EXPECT_EQ(z_eval({1}, Role::Single, 1.0, 0.0), 0.0);
  const auto rule = gauss_hermite(64);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      const double w = 2.5;  // single-particle frequency; substitute x = sqrt(w) z
      double s = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double z = rule.nodes[i] / std::sqrt(w);
        s += rule.weights[i] * std::exp(rule.nodes[i] * rule.nodes[i]) * z_eval({a}, Role::Single, w, z) *
             z_eval({b}, Role::Single, w, z) / std::sqrt(w);
      }
      EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-12);
    }
}

TEST(ZEval, GroundStateFactorizesIntoCmAndRelative) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double wz = 1.8;
  for (int i = 0; i < 10; ++i) {
    const double z1 = u(rng), z2 = u(rng);
    const double lhs = z_eval({0}, Role::CenterOfMass, wz, 0.5 * (z1 + z2)) * z_eval({0}, Role::Relative, wz, z1 - z2);
    const double rhs = z_eval({0}, Role::Single, wz, z1) * z_eval({0}, Role::Single, wz, z2);
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}
