#include <gtest/gtest.h>

#include <cmath>

#include "procnet/line_graph.hpp"
#include "procnet/louvain.hpp"
#include "procnet/risk.hpp"
#include "support/fixtures.hpp"

namespace procnet {
namespace {

TEST(WeightedSbMoments, ReferenceValues) {
  std::vector<ClusterSummary> flat{{2, 0.5}, {2, 0.5}};
  auto m = weighted_sb_moments(flat);
  EXPECT_DOUBLE_EQ(m.mean, 0.5);
  EXPECT_DOUBLE_EQ(*m.std, 0.0);

  std::vector<ClusterSummary> split{{1, 1.0}, {1, 0.0}};
  m = weighted_sb_moments(split);
  EXPECT_NEAR(m.mean, 0.5, 1e-12);
  EXPECT_NEAR(*m.std, std::sqrt(0.5), 1e-12);

  std::vector<ClusterSummary> one{{5, 0.3}};
  m = weighted_sb_moments(one);
  EXPECT_DOUBLE_EQ(m.mean, 0.3);
  EXPECT_FALSE(m.std.has_value());

  std::vector<ClusterSummary> zero{{3, 0.0}, {4, 0.0}};
  EXPECT_EQ(weighted_sb_moments(zero).mean, 0.0);
}

TEST(WeightedSbMoments, UnequalSizes) {
  // mu = (3*0.2 + 1*0.6) / 4 = 0.3
  // sigma^2 = (3*0.01 + 1*0.09) / ((1/2)*4) = 0.06
  std::vector<ClusterSummary> c{{3, 0.2}, {1, 0.6}};
  auto m = weighted_sb_moments(c);
  EXPECT_NEAR(m.mean, 0.3, 1e-12);
  EXPECT_NEAR(*m.std, std::sqrt(0.06), 1e-12);
}

TEST(WeightedSbMoments, ScaleInvariantAndBounded) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ClusterSummary> c(2 + uniform_below(rng, 8));
    for (auto& x : c) x = {1.0 + static_cast<double>(uniform_below(rng, 50)), uniform01(rng)};
    auto scaled = c;
    const double k = 1.0 + static_cast<double>(uniform_below(rng, 9));
    for (auto& x : scaled) x.size *= k;
    auto a = weighted_sb_moments(c);
    auto b = weighted_sb_moments(scaled);
    EXPECT_NEAR(a.mean, b.mean, 1e-12);
    EXPECT_NEAR(*a.std, *b.std, 1e-12);
    double lo = 1, hi = 0;
    for (auto& x : c) {
      lo = std::min(lo, x.rate);
      hi = std::max(hi, x.rate);
    }
    EXPECT_GE(a.mean, lo - 1e-15);
    EXPECT_LE(a.mean, hi + 1e-15);
  }
}

EdgePartition fixed_partition(std::vector<std::uint32_t> community) {
  EdgePartition p;
  p.community = std::move(community);
  for (auto c : p.community) p.n_communities = std::max<std::size_t>(p.n_communities, c + 1);
  return p;
}

TEST(SbClusteringCv, TwoClusterExample) {
  auto g = test::make_graph({{1, 1, 1, 1}, {2, 2, 1, 0}});
  auto r = sb_clustering_cv(g, fixed_partition({0, 1}));
  EXPECT_NEAR(*r.cv, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(r.cluster_sizes, (std::vector<std::int64_t>{1, 1}));
}

TEST(SbClusteringCv, DegenerateCases) {
  auto g = test::make_graph({{1, 1, 4, 1}, {2, 2, 4, 1}, {3, 3, 4, 0}});
  EXPECT_FALSE(sb_clustering_cv(g, fixed_partition({0, 0, 0})).cv.has_value());
  auto none = test::make_graph({{1, 1, 4, 0}, {2, 2, 4, 0}});
  auto r = sb_clustering_cv(none, fixed_partition({0, 1}));
  EXPECT_EQ(r.mu_w, 0.0);
  EXPECT_FALSE(r.cv.has_value());
}

TEST(SbClusteringCv, EqualRatesGiveZero) {
  auto g = test::make_graph({{1, 1, 4, 1}, {2, 2, 8, 2}, {3, 3, 12, 3}});
  EXPECT_EQ(*sb_clustering_cv(g, fixed_partition({0, 1, 2})).cv, 0.0);
}

TEST(SbClusteringCv, ContractsInheritEdgeCommunities) {
  auto g = test::make_graph({{1, 1, 3, 3}, {1, 2, 2, 0}, {2, 2, 5, 1}});
  ClusteringEvaluator eval(g, fixed_partition({0, 1, 1}));
  auto r = eval.evaluate(g.single_bid_flags());
  EXPECT_EQ(r.cluster_sizes, (std::vector<std::int64_t>{3, 7}));
  EXPECT_DOUBLE_EQ(*r.cluster_sb[0], 1.0);
  EXPECT_DOUBLE_EQ(*r.cluster_sb[1], 1.0 / 7.0);
  EXPECT_EQ(eval.cv(g.single_bid_flags()), r.cv);
}

}  // namespace
}  // namespace procnet
