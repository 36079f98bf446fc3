#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "uavspoof/common.hpp"
#include "uavspoof/scenario.hpp"

namespace uavspoof {

/// Constants of the urban-macro aerial-vehicle (UMa-AV) channel model.
/// Path loss in dB, distances in m, frequency in GHz.
struct UmaAvConstants {
  double los_intercept = 28.0;
  double los_distance_slope = 22.0;
  double frequency_slope = 20.0;
  double nlos_intercept = -17.5;
  double nlos_distance_base = 46.0;
  double nlos_height_slope = 7.0;
  // LoS shadow fading sigma = amplitude * exp(-decay * h_ut)
  double los_sigma_amplitude = 4.64;
  double los_sigma_decay = 0.0066;
  // Above this UAV height the link is always LoS.
  double always_los_height = 100.0;
  double aerial_min_height = 22.5;
};

enum class LosMode {
  kDeterministic,  // LoS iff P(LoS) >= 0.5
  kSampled,        // Bernoulli(P(LoS)) per sample
};

struct ChannelParams {
  double carrier_frequency = 2.0;  // GHz
  bool los_shadow_formula = true;
  double nlos_shadow_sigma = 6.0;   // dB
  double measurement_noise = 0.5;   // dB
  LosMode los_mode = LosMode::kDeterministic;
  std::uint64_t rng_seed = 0;
  UmaAvConstants model;
};

inline void validate(const ChannelParams& p) {
  if (!(p.carrier_frequency > 0.0)) throw Error("carrier_frequency must be > 0");
  if (!(p.nlos_shadow_sigma >= 0.0) || !(p.measurement_noise >= 0.0))
    throw Error("noise sigmas must be >= 0");
}

struct PathLossSample {
  int bs_id = 0;
  std::size_t t = 0;
  double measured_db = 0.0;
  double theoretical_db = 0.0;
};

inline double distance_3d(const Vec3& p, const Vec3& q) { return (p - q).norm(); }

inline double distance_2d(const Vec3& p, const Vec3& q) { return (p - q).head<2>().norm(); }

/// Probability of a line-of-sight link for a UAV at `uav_height` and ground
/// distance `d2d` from an urban macro cell.
inline double los_probability(double uav_height, double d2d, const UmaAvConstants& k = {}) {
  if (!(uav_height > 0.0)) throw Error("uav height must be > 0");
  if (uav_height > k.always_los_height) return 1.0;
  if (uav_height > k.aerial_min_height) {
    const double lg = std::log10(uav_height);
    const double d1 = std::max(460.0 * lg - 700.0, 18.0);
    const double p1 = 4300.0 * lg - 3800.0;
    if (d2d <= d1) return 1.0;
    return d1 / d2d + std::exp(-d2d / p1) * (1.0 - d1 / d2d);
  }
  // Terrestrial UMa rule for low altitudes.
  if (d2d <= 18.0) return 1.0;
  const double c = uav_height <= 13.0 ? 0.0 : std::pow((uav_height - 13.0) / 10.0, 1.5);
  const double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
  return std::clamp(base * (1.0 + c * 1.25 * std::pow(d2d / 100.0, 3) * std::exp(-d2d / 150.0)),
                    0.0, 1.0);
}

inline double los_path_loss(double d3d, double fc_ghz, const UmaAvConstants& k = {}) {
  return k.los_intercept + k.los_distance_slope * std::log10(d3d) + k.frequency_slope * std::log10(fc_ghz);
}

inline double nlos_path_loss(double d3d, double uav_height, double fc_ghz, const UmaAvConstants& k = {}) {
  return k.nlos_intercept + (k.nlos_distance_base - k.nlos_height_slope * std::log10(uav_height)) * std::log10(d3d) +
         k.frequency_slope * std::log10(40.0 * std::numbers::pi * fc_ghz / 3.0);
}

namespace detail {

inline double checked_distance(const Vec3& uav, const BaseStation& bs) {
  const double d = distance_3d(uav, bs.position);
  if (!(d > 0.0)) throw Error("uav coincides with base station " + std::to_string(bs.id));
  return d;
}

inline double branch_loss(bool los, double d3d, const Vec3& uav, const ChannelParams& p) {
  return los ? los_path_loss(d3d, p.carrier_frequency, p.model)
             : nlos_path_loss(d3d, uav.z(), p.carrier_frequency, p.model);
}

}  // namespace detail

inline bool is_los(const Vec3& uav, const BaseStation& bs, const ChannelParams& p) {
  return los_probability(uav.z(), distance_2d(uav, bs.position), p.model) >= 0.5;
}

/// Noise-free path loss (dB) with the branch picked deterministically.
inline double theoretical_path_loss(const Vec3& uav, const BaseStation& bs, const ChannelParams& p) {
  const double d = detail::checked_distance(uav, bs);
  return detail::branch_loss(is_los(uav, bs, p), d, uav, p);
}

inline double shadow_sigma(bool los, double uav_height, const ChannelParams& p) {
  if (!los) return p.nlos_shadow_sigma;
  if (!p.los_shadow_formula) return 0.0;
  return p.model.los_sigma_amplitude * std::exp(-p.model.los_sigma_decay * uav_height);
}

/// Path loss a base station would report for a UAV physically at `uav_true`:
/// the model value plus Gaussian shadow fading plus measurement noise.
/// Always consumes exactly two normal draws (three in sampled-LoS mode).
template <typename Rng>
double measured_path_loss(const Vec3& uav_true, const BaseStation& bs, const ChannelParams& p, Rng& rng) {
  const double d = detail::checked_distance(uav_true, bs);
  bool los = is_los(uav_true, bs, p);
  if (p.los_mode == LosMode::kSampled) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    los = u(rng) < los_probability(uav_true.z(), distance_2d(uav_true, bs.position), p.model);
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double shadow = gauss(rng) * shadow_sigma(los, uav_true.z(), p);
  const double noise = gauss(rng) * p.measurement_noise;
  return detail::branch_loss(los, d, uav_true, p) + shadow + noise;
}

/// Seed of the noise stream for one (flight, base station) pair.
inline std::uint64_t window_seed(const SpoofingScenario& s, const BaseStation& bs, const ChannelParams& p) {
  return derive_seed(s.noise_seed ^ derive_seed(p.rng_seed, stream::kChannel),
                     static_cast<std::uint64_t>(bs.id));
}

/// N aligned samples for one base station: measured at the true position,
/// theoretical at the reported position.
inline std::vector<PathLossSample> sample_window(const SpoofingScenario& s, const BaseStation& bs,
                                                 const ChannelParams& p, std::size_t window_size) {
  if (s.true_trajectory.sample_count() < window_size || s.reported_trajectory.sample_count() < window_size)
    throw Error("trajectory holds fewer than " + std::to_string(window_size) + " samples");
  std::mt19937_64 rng(window_seed(s, bs, p));
  std::vector<PathLossSample> out;
  out.reserve(window_size);
  for (std::size_t k = 0; k < window_size; ++k) {
    const Vec3 truth = s.true_trajectory.position_at(s.true_trajectory.sample_time(k));
    const Vec3 reported = s.reported_trajectory.position_at(s.reported_trajectory.sample_time(k));
    out.push_back({bs.id, k, measured_path_loss(truth, bs, p, rng), theoretical_path_loss(reported, bs, p)});
  }
  return out;
}

}  // namespace uavspoof
