#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "uavspoof/common.hpp"

namespace uavspoof {

struct BaseStation {
  int id = 0;
  Vec3 position = Vec3::Zero();
};

struct Waypoint {
  Vec3 position = Vec3::Zero();
  double time = 0.0;  // seconds since mission start
};

/// Piecewise-linear flight path sampled every `sample_period` seconds.
class Trajectory {
 public:
  Trajectory(std::vector<Waypoint> waypoints, double sample_period)
      : waypoints_(std::move(waypoints)), sample_period_(sample_period) {
    if (waypoints_.size() < 2) throw Error("trajectory needs at least 2 waypoints");
    if (!(sample_period_ > 0.0)) throw Error("sample_period must be > 0");
    for (std::size_t i = 0; i < waypoints_.size(); ++i) {
      const auto& wp = waypoints_[i];
      if (wp.time < 0.0 || wp.position.z() < 0.0)
        throw Error("waypoint " + std::to_string(i) + " has negative time or altitude");
      if (i > 0 && !(wp.time > waypoints_[i - 1].time))
        throw Error("waypoint times must be strictly increasing");
    }
  }

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  double sample_period() const { return sample_period_; }
  double start_time() const { return waypoints_.front().time; }
  double end_time() const { return waypoints_.back().time; }

  /// Number of samples at times start + k*period, k = 1..count, that fit in the path.
  std::size_t sample_count() const {
    return static_cast<std::size_t>(std::floor((end_time() - start_time()) / sample_period_ + 1e-9));
  }

  /// Time of the k-th sample (k is zero-based; the first sample is one period after start).
  double sample_time(std::size_t k) const {
    return std::min(end_time(), start_time() + static_cast<double>(k + 1) * sample_period_);
  }

  Vec3 position_at(double t) const {
    if (!(t >= start_time() && t <= end_time()))
      throw Error("time " + format_double(t) + " outside trajectory span [" +
                  format_double(start_time()) + ", " + format_double(end_time()) + "]");
    auto it = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                               [](double v, const Waypoint& w) { return v < w.time; });
    if (it == waypoints_.end()) return waypoints_.back().position;
    const Waypoint& b = *it;
    const Waypoint& a = *(it - 1);
    const double u = (t - a.time) / (b.time - a.time);
    if (u == 0.0) return a.position;
    return a.position + u * (b.position - a.position);
  }

 private:
  std::vector<Waypoint> waypoints_;
  double sample_period_;
};

inline Vec3 position_at(const Trajectory& trajectory, double t) { return trajectory.position_at(t); }

struct SpoofingScenario {
  Trajectory true_trajectory;      // where the UAV physically is
  Trajectory reported_trajectory;  // where GPS claims it is
  bool label = false;              // true = spoofed
  std::size_t spoof_onset = 0;     // sample index at which the paths diverge
  std::size_t true_destination = 0;
  std::size_t reported_destination = 0;
  std::uint64_t noise_seed = 0;
};

struct ScenarioConfig {
  std::vector<BaseStation> base_stations;
  Vec3 start = Vec3::Zero();
  double mission_radius = 0.0;  // m
  std::size_t n_destinations = 0;
  double carrier_frequency = 0.0;  // GHz
  std::size_t window_size = 0;     // N
  std::uint64_t rng_seed = 0;
  double sample_period = 1.0;  // s
};

/// Elevation of the upper/lower destination rings (degrees).
inline constexpr double kDestinationElevationDeg = 15.0;
/// Index of the destination the mission is actually planned for.
inline constexpr std::size_t kRealDestination = 0;

inline ScenarioConfig default_config() {
  ScenarioConfig c;
  c.base_stations = {{1, Vec3(0, 0, 35)}, {2, Vec3(150, 150, 35)}, {3, Vec3(300, 150, 35)}};
  c.start = Vec3(150, 150, 150);
  c.mission_radius = 100.0;
  c.n_destinations = 16;
  c.carrier_frequency = 2.0;
  c.window_size = 100;
  c.rng_seed = 0;
  c.sample_period = 1.0;
  return c;
}

inline void validate(const ScenarioConfig& c) {
  if (c.base_stations.empty()) throw Error("config has no base stations");
  std::set<int> ids;
  for (const auto& bs : c.base_stations) {
    if (!(bs.position.z() > 0.0))
      throw Error("base station " + std::to_string(bs.id) + " must have height > 0");
    if (!ids.insert(bs.id).second) throw Error("duplicate base station id " + std::to_string(bs.id));
  }
  if (c.n_destinations < 2) throw Error("n_destinations must be >= 2");
  if (c.window_size < 2) throw Error("window_size must be >= 2");
  if (!(c.carrier_frequency > 0.0)) throw Error("carrier_frequency must be > 0");
  if (!(c.mission_radius > 0.0)) throw Error("mission_radius must be > 0");
  if (!(c.sample_period > 0.0)) throw Error("sample_period must be > 0");
}

/// Splits n destinations into (azimuths, elevation rings). Even counts of at
/// least 4 use two rings at +/-15 degrees, anything else a single ring at 0.
inline std::pair<std::size_t, std::size_t> destination_layout(std::size_t n) {
  if (n >= 4 && n % 2 == 0) return {n / 2, 2};
  return {n, 1};
}

/// Destinations on a sphere of radius mission_radius around the start,
/// evenly spaced in azimuth, lower ring first.
inline std::vector<Vec3> destination_grid(const ScenarioConfig& c) {
  if (c.n_destinations == 0) throw Error("n_destinations must be >= 1");
  const auto [n_az, n_el] = destination_layout(c.n_destinations);
  const double pi = std::numbers::pi;
  std::vector<Vec3> out;
  out.reserve(c.n_destinations);
  for (std::size_t e = 0; e < n_el; ++e) {
    const double el = n_el == 1 ? 0.0 : (e == 0 ? -1.0 : 1.0) * kDestinationElevationDeg * pi / 180.0;
    for (std::size_t a = 0; a < n_az; ++a) {
      const double az = 2.0 * pi * static_cast<double>(a) / static_cast<double>(n_az);
      Vec3 p = c.start + c.mission_radius * Vec3(std::cos(el) * std::cos(az),
                                                 std::cos(el) * std::sin(az), std::sin(el));
      if (!(p.z() > 0.0))
        throw Error("destination altitude " + format_double(p.z()) + " m is not above ground");
      out.push_back(p);
    }
  }
  return out;
}

/// Straight flight from start to `destination`, lasting one window.
inline Trajectory flight_to(const ScenarioConfig& c, const Vec3& destination) {
  const double duration = static_cast<double>(c.window_size) * c.sample_period;
  return Trajectory({{c.start, 0.0}, {destination, duration}}, c.sample_period);
}

/// One flight: the UAV physically heads to `true_dest` while GPS reports the
/// path to `reported_dest`. Spoofing starts at take-off.
inline SpoofingScenario make_scenario(const ScenarioConfig& c, const std::vector<Vec3>& destinations,
                                      std::size_t true_dest, std::size_t reported_dest,
                                      std::uint64_t noise_seed) {
  return SpoofingScenario{flight_to(c, destinations.at(true_dest)),
                          flight_to(c, destinations.at(reported_dest)),
                          true_dest != reported_dest,
                          0,
                          true_dest,
                          reported_dest,
                          noise_seed};
}

enum class Balance { kNone, kReplicateLegitimate };

/// One flight per destination with the reported path fixed on the real
/// destination. With kReplicateLegitimate the legitimate flight is repeated
/// with fresh noise seeds until the classes are 1:1; legitimate and spoofed
/// flights are then interleaved.
inline std::vector<SpoofingScenario> build_scenarios(const ScenarioConfig& c,
                                                     Balance balance = Balance::kReplicateLegitimate) {
  validate(c);
  const auto dests = destination_grid(c);
  const std::uint64_t base = derive_seed(c.rng_seed, stream::kScenario);
  std::vector<SpoofingScenario> out;
  std::uint64_t next = 0;
  if (balance == Balance::kNone) {
    for (std::size_t d = 0; d < dests.size(); ++d)
      out.push_back(make_scenario(c, dests, d, kRealDestination, derive_seed(base, next++)));
    return out;
  }
  for (std::size_t d = 0; d < dests.size(); ++d) {
    if (d == kRealDestination) continue;
    out.push_back(make_scenario(c, dests, kRealDestination, kRealDestination, derive_seed(base, next++)));
    out.push_back(make_scenario(c, dests, d, kRealDestination, derive_seed(base, next++)));
  }
  return out;
}

}  // namespace uavspoof
