#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "uavspoof/channel.hpp"

namespace uavspoof {
namespace {

ChannelParams noiseless() {
  ChannelParams p;
  p.los_shadow_formula = false;
  p.nlos_shadow_sigma = 0.0;
  p.measurement_noise = 0.0;
  return p;
}

TEST(Distance3d, HandValues) {
  EXPECT_EQ(distance_3d(Vec3::Zero(), Vec3::Zero()), 0.0);
  EXPECT_DOUBLE_EQ(distance_3d(Vec3(150, 150, 150), Vec3(150, 150, 35)), 115.0);
  EXPECT_NEAR(distance_3d(Vec3(150, 150, 150), Vec3(0, 0, 35)), std::sqrt(58225.0), 1e-12);
  EXPECT_NEAR(distance_3d(Vec3(150, 150, 150), Vec3(0, 0, 35)), 241.2986, 1e-4);
}

TEST(LosProbability, AboveHundredMetresIsAlwaysLos) {
  for (double d2d : {0.0, 1.0, 50.0, 500.0, 5000.0}) EXPECT_EQ(los_probability(150.0, d2d), 1.0);
  EXPECT_EQ(los_probability(100.5, 10000.0), 1.0);
}

TEST(LosProbability, AerialRuleBelowHundredMetres) {
  // h = 50: d1 = 460 log10(50) - 700 = 81.526 m, p1 = 4300 log10(50) - 3800 = 3505.57 m.
  EXPECT_EQ(los_probability(50.0, 10.0), 1.0);
  EXPECT_EQ(los_probability(50.0, 81.0), 1.0);
  EXPECT_NEAR(los_probability(50.0, 1000.0), 0.772051870462364, 1e-12);
}

TEST(LosProbability, AlwaysAProbability) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> h(0.5, 300), d(0, 5000);
  for (int i = 0; i < 2000; ++i) {
    const double p = los_probability(h(rng), d(rng));
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  EXPECT_THROW(los_probability(0.0, 10.0), Error);
}

TEST(TheoreticalPathLoss, HandEvaluatedLosValues) {
  const ChannelParams p;
  const BaseStation bs2{2, Vec3(150, 150, 35)};
  const BaseStation bs1{1, Vec3(0, 0, 35)};
  // 28 + 22 log10(115) + 20 log10(2)
  EXPECT_NEAR(theoretical_path_loss(Vec3(150, 150, 150), bs2, p), 79.356, 5e-4);
  EXPECT_NEAR(theoretical_path_loss(Vec3(150, 150, 150), bs2, p), 79.35595240105908, 1e-10);
  EXPECT_NEAR(theoretical_path_loss(Vec3(150, 150, 150), bs1, p), 86.437, 5e-4);
}

TEST(TheoreticalPathLoss, DoublingFrequencyAddsSixDb) {
  ChannelParams p;
  const BaseStation bs{1, Vec3(0, 0, 35)};
  const double base = theoretical_path_loss(Vec3(100, 40, 150), bs, p);
  p.carrier_frequency *= 2.0;
  EXPECT_NEAR(theoretical_path_loss(Vec3(100, 40, 150), bs, p) - base, 20.0 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(20.0 * std::log10(2.0), 6.0206, 1e-4);
}

TEST(TheoreticalPathLoss, ZeroDistanceThrows) {
  const BaseStation bs{1, Vec3(0, 0, 35)};
  EXPECT_THROW(theoretical_path_loss(Vec3(0, 0, 35), bs, ChannelParams{}), Error);
}

TEST(TheoreticalPathLoss, NlosBranchForLowFarUav) {
  const ChannelParams p;
  const BaseStation bs{1, Vec3(0, 0, 35)};
  const Vec3 uav(2000, 0, 30);
  ASSERT_LT(los_probability(30, 2000), 0.5);
  EXPECT_DOUBLE_EQ(theoretical_path_loss(uav, bs, p), nlos_path_loss(distance_3d(uav, bs.position), 30, 2.0));
  EXPECT_DOUBLE_EQ(nlos_path_loss(100.0, 30.0, 2.0),
                   -17.5 + (46 - 7 * std::log10(30.0)) * 2.0 + 20 * std::log10(40 * std::numbers::pi * 2.0 / 3));
}

TEST(TheoreticalPathLoss, MonotoneInDistanceWithinEachBranch) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(1.0, 5000.0), h(1.0, 300.0), f(0.5, 6.0);
  for (int i = 0; i < 2000; ++i) {
    double a = d(rng), b = d(rng);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    const double fc = f(rng), hu = h(rng);
    EXPECT_LT(los_path_loss(a, fc), los_path_loss(b, fc));
    EXPECT_LT(nlos_path_loss(a, hu, fc), nlos_path_loss(b, hu, fc));
  }
}

TEST(TheoreticalPathLoss, TranslationInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-500, 500), z(10, 200), shift(-1000, 1000);
  const ChannelParams p;
  for (int i = 0; i < 500; ++i) {
    const Vec3 uav(c(rng), c(rng), z(rng));
    const BaseStation bs{1, Vec3(c(rng), c(rng), 25)};
    const Vec3 s(shift(rng), shift(rng), 0.0);
    EXPECT_NEAR(theoretical_path_loss(uav, bs, p), theoretical_path_loss(uav + s, {1, bs.position + s}, p), 1e-9);
  }
}

TEST(MeasuredPathLoss, ZeroNoiseEqualsTheory) {
  const BaseStation bs{1, Vec3(0, 0, 35)};
  std::mt19937_64 rng(1);
  const Vec3 uav(120, 80, 140);
  EXPECT_EQ(measured_path_loss(uav, bs, noiseless(), rng), theoretical_path_loss(uav, bs, noiseless()));
}

TEST(MeasuredPathLoss, LosShadowSigmaAt150m) {
  const ChannelParams p;
  EXPECT_NEAR(shadow_sigma(true, 150.0, p), 4.64 * std::exp(-0.99), 1e-15);
  EXPECT_NEAR(shadow_sigma(true, 150.0, p), 1.724, 5e-4);
  EXPECT_EQ(shadow_sigma(false, 150.0, p), 6.0);
  EXPECT_EQ(shadow_sigma(true, 150.0, noiseless()), 0.0);
}

TEST(MeasuredPathLoss, ZeroMeanNoiseMonteCarlo) {
  const ChannelParams p;
  const BaseStation bs{1, Vec3(0, 0, 35)};
  const Vec3 uav(150, 150, 150);
  const double theory = theoretical_path_loss(uav, bs, p);
  const double sigma = std::hypot(shadow_sigma(true, 150.0, p), p.measurement_noise);
  std::mt19937_64 rng(2024);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = measured_path_loss(uav, bs, p, rng) - theory;
    sum += d;
    sq += d * d;
  }
  EXPECT_LE(std::abs(sum / n), 3.0 * sigma / std::sqrt(double(n)));
  EXPECT_NEAR(std::sqrt(sq / n), sigma, 0.02);
}

TEST(MeasuredPathLoss, DeterministicGivenRngState) {
  const BaseStation bs{1, Vec3(0, 0, 35)};
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 10; ++i)
    EXPECT_EQ(measured_path_loss(Vec3(1, 2, 150), bs, ChannelParams{}, a),
              measured_path_loss(Vec3(1, 2, 150), bs, ChannelParams{}, b));
}

SpoofingScenario scenario_to(std::size_t dest, std::uint64_t seed = 1) {
  const auto c = default_config();
  return make_scenario(c, destination_grid(c), dest, kRealDestination, seed);
}

TEST(SampleWindow, LegitimateZeroNoiseHasNoDelta) {
  const auto w = sample_window(scenario_to(0), default_config().base_stations[0], noiseless(), 100);
  ASSERT_EQ(w.size(), 100u);
  for (const auto& s : w) EXPECT_EQ(s.measured_db, s.theoretical_db);
}

TEST(SampleWindow, SpoofedZeroNoiseDiffers) {
  const auto w = sample_window(scenario_to(4), default_config().base_stations[0], noiseless(), 100);
  bool any = false;
  for (const auto& s : w) any = any || s.measured_db != s.theoretical_db;
  EXPECT_TRUE(any);
}

TEST(SampleWindow, DefaultLengthAndFields) {
  const auto c = default_config();
  const auto w = sample_window(scenario_to(5), c.base_stations[2], ChannelParams{}, c.window_size);
  ASSERT_EQ(w.size(), 100u);
  for (std::size_t k = 0; k < w.size(); ++k) {
    EXPECT_EQ(w[k].bs_id, 3);
    EXPECT_EQ(w[k].t, k);
    EXPECT_TRUE(std::isfinite(w[k].measured_db));
    EXPECT_GT(w[k].theoretical_db, 0.0);
  }
}

TEST(SampleWindow, TooShortTrajectoryThrows) {
  EXPECT_THROW(sample_window(scenario_to(1), default_config().base_stations[0], ChannelParams{}, 101), Error);
}

TEST(SampleWindow, SeededDeterminism) {
  const auto bs = default_config().base_stations[1];
  const auto a = sample_window(scenario_to(3, 77), bs, ChannelParams{}, 100);
  const auto b = sample_window(scenario_to(3, 77), bs, ChannelParams{}, 100);
  const auto c = sample_window(scenario_to(3, 78), bs, ChannelParams{}, 100);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].measured_db, b[k].measured_db);
  EXPECT_NE(a[0].measured_db, c[0].measured_db);
}

TEST(SampleWindow, SampledLosModeMatchesDeterministicAboveHundredMetres) {
  ChannelParams det, sampled;
  sampled.los_mode = LosMode::kSampled;
  det.measurement_noise = sampled.measurement_noise = 0.0;
  det.los_shadow_formula = sampled.los_shadow_formula = false;
  const auto bs = default_config().base_stations[0];
  const auto a = sample_window(scenario_to(6), bs, det, 100);
  const auto b = sample_window(scenario_to(6), bs, sampled, 100);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].measured_db, b[k].measured_db);
}

}  // namespace
}  // namespace uavspoof
