#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/graph.hpp"
#include "procnet/market_stats.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace procnet {
namespace {

using test::make_graph;

TEST(MarketGraph, AggregatesContractsPerPair) {
  auto g = make_graph({{1, 1, 2, 1}, {1, 2, 1, 0}});
  ASSERT_EQ(g.n_edges(), 2u);
  const auto i1 = g.find_node(Role::Issuer, "I1");
  const auto w1 = g.find_node(Role::Winner, "W1");
  const auto& e = g.edge(0);
  EXPECT_EQ(e.issuer, i1);
  EXPECT_EQ(e.winner, w1);
  EXPECT_EQ(e.stats.weight, 2);
  EXPECT_EQ(e.stats.single_bid_count, 1);
  EXPECT_EQ(g.edge(1).stats.weight, 1);
  EXPECT_EQ(g.edge(1).stats.single_bid_count, 0);
  EXPECT_EQ(g.strength(i1), 3);
  EXPECT_EQ(g.n_contracts(), 3u);
}

TEST(MarketGraph, SingleContractAndRepeatedPair) {
  auto one = make_graph({{0, 0, 1}});
  EXPECT_EQ(one.n_edges(), 1u);
  EXPECT_EQ(one.edge(0).stats.weight, 1);
  auto many = make_graph({{0, 0, 17}});
  EXPECT_EQ(many.n_edges(), 1u);
  EXPECT_EQ(many.edge(0).stats.weight, 17);
}

TEST(MarketGraph, EmptyTableIsAnError) {
  try {
    MarketGraph::build(ContractTable{});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "empty market");
  }
}

TEST(MarketGraph, SameNameInBothRolesIsTwoNodes) {
  ContractTable t;
  t.records.push_back(test::make_record("a", "X", "X", 2));
  auto g = MarketGraph::build(t);
  EXPECT_EQ(g.n_nodes(), 2u);
}

TEST(MarketGraph, ConservationOnRandomGraphs) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto edges = test::random_bipartite(rng, 12, 5);
    for (auto& e : edges) e.single_bids = static_cast<int>(uniform_below(rng, e.weight + 1));
    auto g = make_graph(edges);
    std::int64_t total_w = 0, total_sb = 0, issuer_s = 0, winner_s = 0;
    for (const auto& e : g.edges()) {
      total_w += e.stats.weight;
      total_sb += e.stats.single_bid_count;
      EXPECT_EQ(static_cast<std::int64_t>(e.stats.contracts.size()), e.stats.weight);
    }
    for (NodeIndex v = 0; v < g.n_nodes(); ++v) (g.is_issuer(v) ? issuer_s : winner_s) += g.strength(v);
    const auto flags = g.single_bid_flags();
    EXPECT_EQ(total_w, static_cast<std::int64_t>(g.n_contracts()));
    EXPECT_EQ(total_sb, std::accumulate(flags.begin(), flags.end(), std::int64_t{0}));
    EXPECT_EQ(issuer_s, total_w);
    EXPECT_EQ(winner_s, total_w);
  }
}

TEST(MarketStats, DensityAndMoments) {
  auto s = market_stats(make_graph({{1, 1}, {2, 2}}));
  EXPECT_DOUBLE_EQ(s.density, 0.5);

  auto k22 = market_stats(make_graph(test::complete_bipartite(2, 2)));
  EXPECT_DOUBLE_EQ(k22.density, 1.0);
  EXPECT_DOUBLE_EQ(k22.mean_strength_issuers, 2.0);
  EXPECT_DOUBLE_EQ(k22.mean_strength_winners, 2.0);
  EXPECT_DOUBLE_EQ(k22.std_strength_issuers, 0.0);
}

TEST(MarketStats, HandCountedExample) {
  auto s = market_stats(make_graph({{1, 1, 2, 1}, {1, 2, 1, 0}}));
  EXPECT_DOUBLE_EQ(s.mean_strength_issuers, 3.0);
  EXPECT_DOUBLE_EQ(s.mean_strength_winners, 1.5);
  EXPECT_DOUBLE_EQ(s.std_strength_winners, 0.5);  // population std of {2, 1}
  EXPECT_DOUBLE_EQ(*s.single_bidding_rate, 1.0 / 3.0);
  EXPECT_EQ(s.n_contracts, 3);
}

TEST(RobinsAlexander, SmallCases) {
  auto k22 = make_graph(test::complete_bipartite(2, 2));
  auto c = count_cycles_and_paths(k22);
  EXPECT_EQ(c.four_cycles, 1u);
  EXPECT_EQ(c.three_paths, 4u);
  EXPECT_DOUBLE_EQ(*robins_alexander_clustering(k22), 1.0);
  EXPECT_DOUBLE_EQ(*robins_alexander_clustering(k22, false), 0.25);

  auto path = make_graph({{1, 1}, {2, 1}, {2, 2}});
  EXPECT_DOUBLE_EQ(*robins_alexander_clustering(path), 0.0);

  EXPECT_FALSE(robins_alexander_clustering(make_graph({{1, 1}})).has_value());
}

TEST(RobinsAlexander, CompleteBipartiteIsOne) {
  for (int m = 2; m <= 6; ++m) {
    for (int n = 2; n <= 6; ++n) {
      EXPECT_DOUBLE_EQ(*robins_alexander_clustering(make_graph(test::complete_bipartite(m, n))), 1.0) << m << "x" << n;
    }
  }
}

TEST(RobinsAlexander, MatchesBruteForceEnumeration) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = make_graph(test::random_bipartite(rng, 12, 5, 0.3 + 0.5 * uniform01(rng)));
    auto fast = count_cycles_and_paths(g);
    auto slow = test::brute_cycles_and_paths(g);
    ASSERT_EQ(fast.four_cycles, slow.four_cycles);
    ASSERT_EQ(fast.three_paths, slow.three_paths);
  }
}

TEST(EdgeList, WritesOneRowPerEdge) {
  std::ostringstream out;
  write_edge_list_csv(out, make_graph({{1, 1, 2, 1}, {1, 2, 1, 0}}));
  EXPECT_EQ(out.str(), "issuer_id,winner_id,weight,single_bid_count\nI1,W1,2,1\nI1,W2,1,0\n");
}

}  // namespace
}  // namespace procnet
