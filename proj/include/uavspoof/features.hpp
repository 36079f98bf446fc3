#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavspoof/channel.hpp"
#include "uavspoof/common.hpp"
#include "uavspoof/stats.hpp"

namespace uavspoof {

enum class FeatureMethod { kMvsk, kBox, kWd };

inline constexpr std::string_view to_string(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::kMvsk: return "mvsk";
    case FeatureMethod::kBox: return "box";
    case FeatureMethod::kWd: return "wd";
  }
  return "?";
}

inline FeatureMethod parse_feature_method(std::string_view s) {
  if (s == "mvsk" || s == "MVSK") return FeatureMethod::kMvsk;
  if (s == "box" || s == "BOX") return FeatureMethod::kBox;
  if (s == "wd" || s == "WD") return FeatureMethod::kWd;
  throw Error("unknown feature method '" + std::string(s) + "' (expected mvsk, box or wd)");
}

/// Features contributed by each base station.
inline constexpr std::size_t features_per_bs(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::kMvsk: return 4;
    case FeatureMethod::kBox: return 5;
    case FeatureMethod::kWd: return 1;
  }
  return 0;
}

/// What the WD extractor compares.
enum class WdOperands {
  kMeasuredVsTheoretical,  // raw measured series against raw theoretical series
  kDeltaVsZero,            // |delta| series against a point mass at 0
};

/// Absolute per-instant differences between measured and theoretical path
/// loss for one base station.
struct DeltaSeries {
  int bs_id = 0;
  std::vector<double> values;

  double mean() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
  }
};

inline DeltaSeries delta_series(std::span<const PathLossSample> window) {
  if (window.empty()) throw Error("delta_series of empty window");
  DeltaSeries out{window.front().bs_id, {}};
  out.values.reserve(window.size());
  for (const auto& s : window) {
    if (s.bs_id != out.bs_id)
      throw Error("window mixes base stations " + std::to_string(out.bs_id) + " and " +
                  std::to_string(s.bs_id));
    out.values.push_back(std::abs(s.measured_db - s.theoretical_db));
  }
  return out;
}

struct FeatureVector {
  FeatureMethod method = FeatureMethod::kWd;
  std::vector<std::vector<double>> per_bs;  // ascending bs id
  std::vector<double> flattened;
  bool label = false;  // true = spoofed
};

/// Features of one base station's window.
inline std::vector<double> extract_one(std::span<const PathLossSample> window, FeatureMethod method,
                                       WdOperands wd = WdOperands::kMeasuredVsTheoretical) {
  switch (method) {
    case FeatureMethod::kMvsk: {
      const auto m = mvsk(delta_series(window).values);
      return {m.mean, m.variance, m.skewness, m.kurtosis};
    }
    case FeatureMethod::kBox: {
      const auto q = box(delta_series(window).values);
      return {q.q0, q.q1, q.q2, q.q3, q.q4};
    }
    case FeatureMethod::kWd: {
      if (wd == WdOperands::kDeltaVsZero) {
        const auto d = delta_series(window);
        const std::vector<double> zeros(d.values.size(), 0.0);
        return {wasserstein_1d(d.values, zeros)};
      }
      std::vector<double> measured, theoretical;
      measured.reserve(window.size());
      theoretical.reserve(window.size());
      for (const auto& s : window) {
        measured.push_back(s.measured_db);
        theoretical.push_back(s.theoretical_db);
      }
      return {wasserstein_1d(measured, theoretical)};
    }
  }
  throw Error("unreachable feature method");
}

/// Feature vector for one decision instant: one window per base station,
/// concatenated in ascending bs id order.
inline FeatureVector extract(std::vector<std::vector<PathLossSample>> windows, FeatureMethod method,
                             bool label = false, WdOperands wd = WdOperands::kMeasuredVsTheoretical) {
  if (windows.empty()) throw Error("extract needs at least one window");
  for (const auto& w : windows)
    if (w.empty()) throw Error("extract got an empty window");
  std::sort(windows.begin(), windows.end(),
            [](const auto& a, const auto& b) { return a.front().bs_id < b.front().bs_id; });
  FeatureVector fv{method, {}, {}, label};
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].size() != windows.front().size()) throw Error("windows differ in length");
    if (i > 0 && windows[i].front().bs_id == windows[i - 1].front().bs_id)
      throw Error("duplicate window for base station " + std::to_string(windows[i].front().bs_id));
    fv.per_bs.push_back(extract_one(windows[i], method, wd));
    fv.flattened.insert(fv.flattened.end(), fv.per_bs.back().begin(), fv.per_bs.back().end());
  }
  return fv;
}

}  // namespace uavspoof
