#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uavspoof/common.hpp"
#include "uavspoof/features.hpp"

namespace uavspoof {

enum class Aggregation { kMeanDelta, kMajorityVote };

inline Aggregation parse_aggregation(std::string_view s) {
  if (s == "mean" || s == "mean-delta") return Aggregation::kMeanDelta;
  if (s == "majority" || s == "majority-vote") return Aggregation::kMajorityVote;
  throw Error("unknown aggregation '" + std::string(s) + "' (expected mean or majority)");
}

/// Threshold hypothesis test on window-mean delta: spoofed when it exceeds T.
struct ThresholdDetector {
  double threshold_db = 0.0;
  Aggregation aggregation = Aggregation::kMeanDelta;
};

/// Returns true (spoofed) when the aggregated window-mean delta exceeds T.
inline bool decide(const ThresholdDetector& det, std::span<const DeltaSeries> deltas) {
  if (deltas.empty()) throw Error("decide needs at least one delta series");
  if (!(det.threshold_db >= 0.0)) throw Error("threshold must be >= 0");
  if (det.aggregation == Aggregation::kMeanDelta) {
    double acc = 0.0;
    for (const auto& d : deltas) acc += d.mean();
    return acc / static_cast<double>(deltas.size()) > det.threshold_db;
  }
  std::size_t over = 0;
  for (const auto& d : deltas)
    if (d.mean() > det.threshold_db) ++over;
  return 2 * over > deltas.size();
}

struct LabeledDeltas {
  std::vector<DeltaSeries> per_bs;
  bool label = false;
};

struct OperatingPoint {
  double threshold_db = 0.0;
  double accuracy = 0.0;
  double false_positive_rate = 0.0;  // legitimate windows flagged as spoofed
  double false_negative_rate = 0.0;  // spoofed windows passed as legitimate
};

inline std::vector<OperatingPoint> sweep_threshold(std::span<const LabeledDeltas> data,
                                                   std::span<const double> t_grid,
                                                   Aggregation aggregation = Aggregation::kMeanDelta) {
  if (data.empty() || t_grid.empty()) throw Error("sweep_threshold needs data and a threshold grid");
  std::size_t n_pos = 0;
  for (const auto& row : data) n_pos += row.label ? 1 : 0;
  const std::size_t n_neg = data.size() - n_pos;
  std::vector<OperatingPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const ThresholdDetector det{t, aggregation};
    std::size_t correct = 0, fp = 0, fn = 0;
    for (const auto& row : data) {
      const bool spoofed = decide(det, row.per_bs);
      if (spoofed == row.label) ++correct;
      else if (spoofed) ++fp;
      else ++fn;
    }
    out.push_back({t, static_cast<double>(correct) / static_cast<double>(data.size()),
                   n_neg ? static_cast<double>(fp) / static_cast<double>(n_neg) : 0.0,
                   n_pos ? static_cast<double>(fn) / static_cast<double>(n_pos) : 0.0});
  }
  return out;
}

/// Highest-accuracy point; the smallest threshold wins ties.
inline OperatingPoint best_operating_point(std::span<const OperatingPoint> curve) {
  if (curve.empty()) throw Error("empty operating curve");
  const OperatingPoint* best = &curve.front();
  for (const auto& p : curve)
    if (p.accuracy > best->accuracy || (p.accuracy == best->accuracy && p.threshold_db < best->threshold_db))
      best = &p;
  return *best;
}

/// Evenly spaced thresholds from lo to hi inclusive.
inline std::vector<double> threshold_grid(double lo, double hi, std::size_t steps) {
  if (steps < 2) return {lo};
  std::vector<double> g(steps);
  for (std::size_t i = 0; i < steps; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  return g;
}

}  // namespace uavspoof
