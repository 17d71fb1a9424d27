#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "qdot/model.hpp"

using namespace qdot;

TEST(EffectiveFrequency, ZeroFieldIsBareConfinement) { EXPECT_DOUBLE_EQ(effective_frequency(FieldPoint(0.0)), 1.0); }

TEST(EffectiveFrequency, DirectSubstitution) {
  EXPECT_NEAR(effective_frequency(FieldPoint(1.65)), std::sqrt(1.0 + 1.65 * 1.65), 1e-15);
  EXPECT_NEAR(effective_frequency(FieldPoint(1.65)), 1.929378, 1e-6);
}

TEST(EffectiveFrequency, LargeFieldAsymptote) {
  const double wl = 1e3;
  EXPECT_NEAR(effective_frequency(FieldPoint(wl)) / wl, 1.0, 1e-6);
}

TEST(EffectiveFrequency, AtLeastOneAndIncreasing) {
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double w = effective_frequency(FieldPoint(0.05 * i));
    EXPECT_GE(w, 1.0);
    EXPECT_GT(w, prev);
    prev = w;
  }
}

TEST(EffectiveInteraction, Values) {
  ModelParams p;
  p.lambda = 2.0;
  EXPECT_DOUBLE_EQ(effective_interaction(p, FieldPoint(0.0)), 2.0);
  EXPECT_LT(effective_interaction(p, FieldPoint(1e6)), 2e-3);
  double prev = 3.0;
  for (int i = 0; i <= 20; ++i) {
    const double v = effective_interaction(p, FieldPoint(0.25 * i));
    EXPECT_LT(v, prev);
    prev = v;
  }
  p.lambda = 0.0;
  EXPECT_EQ(effective_interaction(p, FieldPoint(1.3)), 0.0);
}

TEST(ZeemanShift, GaAsTriplet) {
  const ModelParams p = ModelParams::gaas_2d();
  EXPECT_NEAR(zeeman_shift(p, FieldPoint(1.0), 1), -0.02948, 1e-12);
  EXPECT_EQ(zeeman_shift(p, FieldPoint(2.0), 0), 0.0);
  EXPECT_NEAR(zeeman_shift(p, FieldPoint(2.0), -1), 2 * 0.02948, 1e-12);
}

TEST(ZeemanShift, VanishesWithoutGFactor) {
  ModelParams p;
  p.g_star = 0.0;
  EXPECT_EQ(zeeman_shift(p, FieldPoint(1.7), 1), 0.0);
}

TEST(ZeemanShift, RejectsInvalidSpinProjection) {
  EXPECT_THROW(zeeman_shift(ModelParams{}, FieldPoint(1.0), 2), std::invalid_argument);
}

TEST(FieldPoint, RejectsNegativeAndNan) {
  EXPECT_THROW(FieldPoint(-0.1), std::invalid_argument);
  EXPECT_THROW(FieldPoint(std::nan("")), std::invalid_argument);
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(ModelParams::gaas_2d().validate());
  EXPECT_NO_THROW(ModelParams::three_d(2.0).validate());
  ModelParams p;
  p.lambda = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.wz_ratio = 2.0;  // finite omega_z with a 2D dimension tag
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = ModelParams::three_d(2.0);
  p.wz_ratio = kInf;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.mass_ratio = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ModelParams, PhysicalUnitsOnlyAtConversion) {
  ModelParams p;
  EXPECT_NEAR(to_meV(p, 2.0), 6.33, 1e-12);
  p.hbar_omega0_meV.reset();
  EXPECT_THROW(to_meV(p, 1.0), std::invalid_argument);
}
