#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "procnet/analysis.hpp"
#include "procnet/core.hpp"
#include "procnet/errors.hpp"
#include "procnet/nullmodel.hpp"
#include "procnet/synth.hpp"
#include "support/fixtures.hpp"

namespace procnet {
namespace {

MarketGraph graph_with_classes() {
  std::vector<test::TestEdge> edges{
      {1, 1, 4, 2, "45000000"}, {1, 2, 3, 1, "33000000"}, {2, 1, 2, 0, "45100000"}, {2, 3, 5, 3, "33100000"},
      {3, 2, 2, 2, "72000000"}};
  return test::make_graph(edges);
}

std::map<std::uint16_t, int> per_class(const MarketGraph& g, FlagSpan flags) {
  std::map<std::uint16_t, int> out;
  for (std::size_t c = 0; c < flags.size(); ++c) out[g.contracts()[c].cpv_class] += flags[c];
  return out;
}

TEST(CpvShuffler, ConservesClassCounts) {
  auto g = graph_with_classes();
  CpvShuffler shuffler(g);
  EXPECT_EQ(shuffler.n_classes(), 3u);
  const auto observed = g.single_bid_flags();
  for (std::size_t i = 0; i < 200; ++i) {
    auto f = replicate_flags(shuffler, observed, 4, i);
    ASSERT_EQ(per_class(g, f), per_class(g, observed));
  }
}

TEST(CpvShuffler, ConstantClassIsFixed) {
  auto g = test::make_graph({{1, 1, 3, 3, "45000000"}, {2, 2, 2, 0, "33000000"}});
  CpvShuffler shuffler(g);
  const auto observed = g.single_bid_flags();
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(replicate_flags(shuffler, observed, 1, i), observed);
}

TEST(CpvShuffler, TwoContractClassIsFair) {
  auto g = test::make_graph({{1, 1, 1, 1, "45000000"}, {2, 2, 1, 0, "45000000"}, {3, 3, 2, 0, "33000000"}});
  CpvShuffler shuffler(g);
  const auto observed = g.single_bid_flags();
  int first_gets_it = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto f = replicate_flags(shuffler, observed, 8, i);
    first_gets_it += f[0];
    EXPECT_EQ(f[2] + f[3], 0);
  }
  EXPECT_NEAR(first_gets_it / static_cast<double>(n), 0.5, 0.02);
}

TEST(CpvShuffler, MissingBidsNeverMove) {
  auto table = test::make_table(std::vector<test::TestEdge>{{1, 1, 4, 2}, {2, 2, 4, 1}});
  table.records[1].n_bids.reset();
  table.records[1].single_bid = false;
  auto g = MarketGraph::build(table);
  CpvShuffler shuffler(g);
  const auto observed = g.single_bid_flags();
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(replicate_flags(shuffler, observed, 2, i)[1], 0);
}

TEST(RelativeScore, Arithmetic) {
  auto [r1, z1] = relative_score(0.3, 0.2, 0.05);
  EXPECT_NEAR(*r1, 1.5, 1e-12);
  EXPECT_NEAR(*z1, 2.0, 1e-12);
  auto [r2, z2] = relative_score(0.2, 0.2, 0.05);
  EXPECT_DOUBLE_EQ(*r2, 1.0);
  EXPECT_DOUBLE_EQ(*z2, 0.0);
  auto [r3, z3] = relative_score(0.2, 0.0, 0.0);
  EXPECT_FALSE(r3.has_value());
  EXPECT_FALSE(z3.has_value());
}

TEST(NullDistribution, GlobalRateIsConserved) {
  auto g = graph_with_classes();
  for (std::uint64_t seed : {0u, 1u, 77u}) {
    auto r = null_distribution("global_sb", global_sb_rate_statistic(g), g, {.n_reps = 100, .seed = seed,
                                                                              .keep_samples = true});
    EXPECT_EQ(*r.ratio, 1.0);
    EXPECT_EQ(r.null_mean, r.observed);
    for (const auto& s : r.samples) EXPECT_EQ(*s, r.observed);
    EXPECT_EQ(*r.null_std, 0.0);
    EXPECT_FALSE(r.z.has_value());
  }
}

TEST(NullDistribution, AllSingleBidMarket) {
  auto g = test::make_graph({{1, 1, 3, 3}, {2, 2, 4, 4}});
  auto r = null_distribution("global_sb", global_sb_rate_statistic(g), g, {.n_reps = 20, .seed = 3});
  EXPECT_EQ(*r.ratio, 1.0);
  EXPECT_FALSE(r.z.has_value());
}

TEST(NullDistribution, UndefinedObservedIsAnError) {
  auto g = graph_with_classes();
  ContractStatistic never = [](FlagSpan) { return std::optional<double>{}; };
  EXPECT_THROW(null_distribution("never", never, g, {.n_reps = 5}), DataError);
}

TEST(NullDistribution, MissingReplicatesAreCounted) {
  auto g = graph_with_classes();
  // Defined only when contract 0 is single-bid: the observed labels have it.
  ContractStatistic first = [](FlagSpan f) { return f[0] ? std::optional<double>(1.0) : std::nullopt; };
  auto r = null_distribution("first", first, g, {.n_reps = 200, .seed = 5, .keep_samples = true});
  EXPECT_GT(r.n_missing, 0u);
  EXPECT_LT(r.n_missing, 200u);
  EXPECT_EQ(r.null_mean, 1.0);
  std::size_t missing = 0;
  for (const auto& s : r.samples) missing += !s.has_value();
  EXPECT_EQ(missing, r.n_missing);
}

TEST(NullDistribution, IndependentOfThreadCount) {
  SynthConfig cfg;
  cfg.n_issuers = 60;
  cfg.n_winners = 120;
  cfg.p_intra = cfg.p_inter = 0.1;
  cfg.risk_regime = {RiskRegime::Kind::Uniform, 0.2, 0.2, {}};
  cfg.seed = 10;
  auto g = MarketGraph::build(generate_market(cfg).table);
  auto partition = detect_communities(g, 1, 1).partition;
  NullOptions one{.n_reps = 64, .seed = 9, .threads = 1, .keep_samples = true};
  NullOptions four = one;
  four.threads = 4;
  auto a = run_cv_null(g, partition, one);
  auto b = run_cv_null(g, partition, four);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(to_json(a), to_json(b));
}

TEST(NullDistribution, JsonUsesNullForSentinels) {
  NullModelResult r;
  r.statistic = "cv";
  r.observed = 0.5;
  r.null_mean = 0.25;
  r.ratio = 2.0;
  r.n_reps = 10;
  r.seed = 1;
  EXPECT_EQ(to_json(r),
            "{\"statistic\":\"cv\",\"observed\":0.5,\"null_mean\":0.25,\"null_std\":null,\"ratio\":2.0,\"z\":null,"
            "\"n_reps\":10,\"n_missing\":0,\"seed\":1}");
}

}  // namespace
}  // namespace procnet
