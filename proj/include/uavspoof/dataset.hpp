#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "uavspoof/baseline.hpp"
#include "uavspoof/channel.hpp"
#include "uavspoof/features.hpp"
#include "uavspoof/mlp.hpp"
#include "uavspoof/scenario.hpp"

namespace uavspoof {

struct DatasetSpec {
  ScenarioConfig scenario = default_config();
  ChannelParams channel;
  FeatureMethod method = FeatureMethod::kWd;
  WdOperands wd_operands = WdOperands::kMeasuredVsTheoretical;
  int n_bs = 3;
  std::size_t train_size = 2259;
  std::size_t test_size = 969;
  std::uint64_t rng_seed = 0;
};

enum class SplitTag { kTrain, kTest };

inline constexpr std::string_view to_string(SplitTag s) { return s == SplitTag::kTrain ? "train" : "test"; }

/// Base station ids per scenario size: all three, the outer pair, or BS1 alone.
inline std::vector<int> select_bs_subset(int n_bs) {
  switch (n_bs) {
    case 3: return {1, 2, 3};
    case 2: return {1, 3};
    case 1: return {1};
    default: throw Error("n_bs must be 1, 2 or 3, got " + std::to_string(n_bs));
  }
}

inline std::vector<BaseStation> subset_stations(const ScenarioConfig& c, int n_bs) {
  std::vector<BaseStation> out;
  for (int id : select_bs_subset(n_bs)) {
    auto it = std::find_if(c.base_stations.begin(), c.base_stations.end(),
                           [id](const BaseStation& b) { return b.id == id; });
    if (it == c.base_stations.end()) throw Error("config lacks base station " + std::to_string(id));
    out.push_back(*it);
  }
  return out;
}

inline void validate(const DatasetSpec& s) {
  validate(s.scenario);
  validate(s.channel);
  if (s.train_size < 1 || s.test_size < 1) throw Error("train_size and test_size must be >= 1");
  (void)subset_stations(s.scenario, s.n_bs);
}

/// One simulated decision instant before feature extraction.
struct WindowRow {
  bool label = false;
  std::uint64_t noise_seed = 0;
  std::size_t true_destination = 0;
  std::vector<std::vector<PathLossSample>> windows;  // ascending bs id
};

struct LabeledDataset {
  std::vector<FeatureVector> rows;
  SplitTag split = SplitTag::kTrain;
  std::string provenance;  // hash of the generating spec
  FeatureMethod method = FeatureMethod::kWd;
  int n_bs = 0;
  std::vector<std::uint64_t> row_seeds;  // empty when loaded from disk

  std::size_t width() const { return rows.empty() ? 0 : rows.front().flattened.size(); }
  std::size_t count(bool label) const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [label](const FeatureVector& r) { return r.label == label; }));
  }
};

namespace detail {

/// Noise seeds for both splits; the test seeds never repeat a train seed.
inline std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> row_seeds(const DatasetSpec& s) {
  std::unordered_set<std::uint64_t> used;
  auto draw = [&](std::uint64_t stream_id, std::size_t n) {
    std::vector<std::uint64_t> out;
    const std::uint64_t base = derive_seed(s.rng_seed, stream_id);
    std::uint64_t k = 0;
    while (out.size() < n) {
      const std::uint64_t seed = derive_seed(base, k++);
      if (used.insert(seed).second) out.push_back(seed);
    }
    return out;
  };
  auto train = draw(stream::kTrainRows, s.train_size);
  auto test = draw(stream::kTestRows, s.test_size);
  return {std::move(train), std::move(test)};
}

}  // namespace detail

/// Simulated windows for one split. Even rows are legitimate flights to the
/// real destination, odd rows cycle through the spoofed destinations.
inline std::vector<WindowRow> generate_windows(const DatasetSpec& spec, SplitTag split) {
  validate(spec);
  const auto dests = destination_grid(spec.scenario);
  const auto stations = subset_stations(spec.scenario, spec.n_bs);
  const auto [train_seeds, test_seeds] = detail::row_seeds(spec);
  const auto& seeds = split == SplitTag::kTrain ? train_seeds : test_seeds;

  std::vector<std::size_t> spoofed;
  for (std::size_t d = 0; d < dests.size(); ++d)
    if (d != kRealDestination) spoofed.push_back(d);

  std::vector<WindowRow> rows;
  rows.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::size_t true_dest = i % 2 == 0 ? kRealDestination : spoofed[(i / 2) % spoofed.size()];
    const SpoofingScenario sc = make_scenario(spec.scenario, dests, true_dest, kRealDestination, seeds[i]);
    WindowRow row{sc.label, seeds[i], true_dest, {}};
    for (const auto& bs : stations)
      row.windows.push_back(sample_window(sc, bs, spec.channel, spec.scenario.window_size));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline LabeledDataset featurize(const DatasetSpec& spec, SplitTag split, const std::vector<WindowRow>& rows,
                                std::string provenance = {}) {
  LabeledDataset ds{{}, split, std::move(provenance), spec.method, spec.n_bs, {}};
  ds.rows.reserve(rows.size());
  for (const auto& r : rows) {
    ds.rows.push_back(extract(r.windows, spec.method, r.label, spec.wd_operands));
    ds.row_seeds.push_back(r.noise_seed);
  }
  return ds;
}

/// Labeled per-BS delta series for the threshold detector.
inline std::vector<LabeledDeltas> to_deltas(const std::vector<WindowRow>& rows) {
  std::vector<LabeledDeltas> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    LabeledDeltas ld{{}, r.label};
    for (const auto& w : r.windows) ld.per_bs.push_back(delta_series(w));
    out.push_back(std::move(ld));
  }
  return out;
}

struct DatasetPair {
  LabeledDataset train;
  LabeledDataset test;
};

inline DatasetPair generate(const DatasetSpec& spec, const std::string& provenance = {}) {
  return {featurize(spec, SplitTag::kTrain, generate_windows(spec, SplitTag::kTrain), provenance),
          featurize(spec, SplitTag::kTest, generate_windows(spec, SplitTag::kTest), provenance)};
}

inline LabeledMatrix to_matrix(const LabeledDataset& ds) {
  const auto w = static_cast<Eigen::Index>(ds.width());
  LabeledMatrix m{Eigen::MatrixXd(w, static_cast<Eigen::Index>(ds.rows.size())),
                  Eigen::VectorXd(static_cast<Eigen::Index>(ds.rows.size()))};
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const auto& r = ds.rows[i];
    if (static_cast<Eigen::Index>(r.flattened.size()) != w) throw Error("dataset rows differ in width");
    const auto c = static_cast<Eigen::Index>(i);
    m.features.col(c) = Eigen::Map<const Eigen::VectorXd>(r.flattened.data(), w);
    m.labels(c) = r.label ? 1.0 : 0.0;
  }
  return m;
}

}  // namespace uavspoof
