#include <unordered_set>

#include <gtest/gtest.h>

#include "uavspoof/config_io.hpp"
#include "uavspoof/dataset.hpp"

namespace uavspoof {
namespace {

DatasetSpec small(FeatureMethod m = FeatureMethod::kWd, int n_bs = 3) {
  DatasetSpec s;
  s.method = m;
  s.n_bs = n_bs;
  s.train_size = 60;
  s.test_size = 30;
  return s;
}

TEST(SelectBsSubset, PerScenario) {
  EXPECT_EQ(select_bs_subset(3), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(select_bs_subset(2), (std::vector<int>{1, 3}));
  EXPECT_EQ(select_bs_subset(1), (std::vector<int>{1}));
  EXPECT_THROW(select_bs_subset(0), Error);
  EXPECT_THROW(select_bs_subset(4), Error);
}

TEST(Generate, DefaultSizesAndWidth) {
  const DatasetSpec spec;
  const DatasetPair p = generate(spec);
  EXPECT_EQ(p.train.rows.size(), 2259u);
  EXPECT_EQ(p.test.rows.size(), 969u);
  EXPECT_EQ(p.train.width(), 3u);
  auto mvsk = spec;
  mvsk.method = FeatureMethod::kMvsk;
  mvsk.train_size = 4;
  mvsk.test_size = 2;
  EXPECT_EQ(generate(mvsk).train.width(), 12u);
}

TEST(Generate, BalancedClasses) {
  const DatasetPair p = generate(small());
  for (const auto* ds : {&p.train, &p.test}) {
    const auto pos = static_cast<std::ptrdiff_t>(ds->count(true));
    const auto neg = static_cast<std::ptrdiff_t>(ds->count(false));
    EXPECT_LE(std::abs(pos - neg), 1);
  }
}

TEST(Generate, SpoofedRowsCoverEveryFalseDestination) {
  const auto rows = generate_windows(small(), SplitTag::kTrain);
  std::set<std::size_t> seen;
  for (const auto& r : rows) {
    EXPECT_EQ(r.label, r.true_destination != kRealDestination);
    if (r.label) seen.insert(r.true_destination);
  }
  EXPECT_EQ(seen.size(), 15u);
}

TEST(Generate, DeterministicForSeed) {
  const DatasetPair a = generate(small(FeatureMethod::kBox));
  const DatasetPair b = generate(small(FeatureMethod::kBox));
  ASSERT_EQ(a.train.rows.size(), b.train.rows.size());
  for (std::size_t i = 0; i < a.train.rows.size(); ++i) EXPECT_EQ(a.train.rows[i].flattened, b.train.rows[i].flattened);
  auto other = small(FeatureMethod::kBox);
  other.rng_seed = 1;
  EXPECT_NE(generate(other).train.rows[0].flattened, a.train.rows[0].flattened);
}

TEST(Generate, TrainAndTestSeedsDisjoint) {
  const DatasetPair p = generate(small());
  std::unordered_set<std::uint64_t> train(p.train.row_seeds.begin(), p.train.row_seeds.end());
  EXPECT_EQ(train.size(), p.train.rows.size());
  for (auto s : p.test.row_seeds) EXPECT_FALSE(train.contains(s));
}

TEST(Generate, SubsetIsPrefixConsistent) {
  // the 1-BS dataset sees exactly BS1's windows from the 3-BS dataset
  const auto three = generate_windows(small(FeatureMethod::kWd, 3), SplitTag::kTest);
  const auto one = generate_windows(small(FeatureMethod::kWd, 1), SplitTag::kTest);
  ASSERT_EQ(three.size(), one.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    ASSERT_EQ(one[i].windows.size(), 1u);
    EXPECT_EQ(one[i].windows[0][5].measured_db, three[i].windows[0][5].measured_db);
  }
}

TEST(Generate, RejectsBadSpec) {
  auto s = small();
  s.n_bs = 4;
  EXPECT_THROW(generate(s), Error);
  s = small();
  s.train_size = 0;
  EXPECT_THROW(generate(s), Error);
  s = small();
  s.scenario.base_stations.pop_back();
  EXPECT_THROW(generate(s), Error);
}

TEST(SpecHash, RecomputesAndTracksChanges) {
  const DatasetSpec a = small();
  EXPECT_EQ(spec_hash(a), spec_hash(small()));
  EXPECT_EQ(spec_hash(a).size(), 64u);
  DatasetSpec b = a;
  b.channel.measurement_noise = 0.25;
  EXPECT_NE(spec_hash(a), spec_hash(b));
  EXPECT_EQ(spec_hash(parse_spec(emit_spec(a))), spec_hash(a));
}

TEST(ToMatrix, ColumnsAreRows) {
  const DatasetPair p = generate(small(FeatureMethod::kMvsk, 2));
  const LabeledMatrix m = to_matrix(p.train);
  EXPECT_EQ(m.width(), 8u);
  EXPECT_EQ(m.size(), 60u);
  EXPECT_EQ(m.features(3, 7), p.train.rows[7].flattened[3]);
  EXPECT_EQ(m.labels(7), p.train.rows[7].label ? 1.0 : 0.0);
}

}  // namespace
}  // namespace uavspoof
