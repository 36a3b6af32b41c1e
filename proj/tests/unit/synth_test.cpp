#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "procnet/errors.hpp"
#include "procnet/graph.hpp"
#include "procnet/synth.hpp"

namespace procnet {
namespace {

SynthConfig small_config(std::uint64_t seed) {
  SynthConfig c;
  c.n_issuers = 100;
  c.n_winners = 200;
  c.p_intra = c.p_inter = 0.1;
  c.seed = seed;
  return c;
}

TEST(GenerateMarket, Deterministic) {
  auto a = generate_market(small_config(3));
  auto b = generate_market(small_config(3));
  auto c = generate_market(small_config(4));
  EXPECT_EQ(a.table.records, b.table.records);
  EXPECT_NE(a.table.records, c.table.records);
}

TEST(GenerateMarket, UniformRateConcentrates) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto c = small_config(seed);
    c.n_issuers = 250;
    c.n_winners = 400;
    c.risk_regime = {RiskRegime::Kind::Uniform, 0.2, 0.2, {}};
    auto m = generate_market(c);
    ASSERT_NEAR(static_cast<double>(m.table.size()), 10000.0, 400.0);
    double sb = 0;
    for (const auto& r : m.table.records) sb += r.single_bid;
    EXPECT_NEAR(sb / static_cast<double>(m.table.size()), 0.2, 0.02);
  }
}

TEST(GenerateMarket, IntraBlockDensity) {
  auto c = small_config(5);
  c.n_blocks = 4;
  c.p_intra = 0.3;
  c.p_inter = 0.02;
  auto m = generate_market(c);
  auto g = MarketGraph::build(m.table);
  std::size_t intra_edges = 0;
  for (const auto& e : g.edges()) {
    const int i = std::stoi(g.node_id(e.issuer).substr(7));
    const int w = std::stoi(g.node_id(e.winner).substr(7));
    intra_edges += m.issuer_block[i] == m.winner_block[w];
  }
  const double pairs = 4.0 * 25 * 50;
  const double se = std::sqrt(0.3 * 0.7 / pairs);
  EXPECT_NEAR(intra_edges / pairs, 0.3, 3 * se);
}

TEST(GenerateMarket, HubEndpointsMultiplyWeights) {
  auto c = small_config(6);
  c.hub_fraction = 0.1;
  c.hub_weight_multiplier = 10;
  c.weight_law = {WeightLaw::Kind::Constant, 2, 2.5, 100};
  auto m = generate_market(c);
  std::map<std::pair<std::string, std::string>, int> weight;
  for (const auto& r : m.table.records) ++weight[{r.issuer_id, r.winner_id}];
  for (const auto& [pair, w] : weight) {
    const int i = std::stoi(pair.first.substr(7));
    const int v = std::stoi(pair.second.substr(7));
    const int expected = 2 * (m.issuer_is_hub[i] ? 10 : 1) * (m.winner_is_hub[v] ? 10 : 1);
    ASSERT_EQ(w, expected);
  }
  int hubs = 0;
  for (auto h : m.issuer_is_hub) hubs += h;
  EXPECT_EQ(hubs, 10);
}

TEST(GenerateMarket, CoreHotLabelsHubPairs) {
  auto c = small_config(7);
  c.hub_fraction = 0.2;
  c.hub_weight_multiplier = 3;
  c.risk_regime = {RiskRegime::Kind::CoreHot, 0.1, 0.4, {}};
  auto m = generate_market(c);
  for (std::size_t k = 0; k < m.table.size(); ++k) {
    const auto& r = m.table.records[k];
    const bool hub_pair = m.issuer_is_hub[std::stoi(r.issuer_id.substr(7))] && m.winner_is_hub[std::stoi(r.winner_id.substr(7))];
    ASSERT_EQ(m.contract_is_hot[k] == 1, hub_pair);
  }
}

TEST(GenerateMarket, BlocksHotWithEqualRatesIsUniform) {
  auto u = small_config(8);
  u.n_blocks = 5;
  u.risk_regime = {RiskRegime::Kind::Uniform, 0.15, 0.15, {}};
  auto b = u;
  b.risk_regime = {RiskRegime::Kind::BlocksHot, 0.15, 0.15, {0, 3}};
  EXPECT_EQ(generate_market(u).table.records, generate_market(b).table.records);
}

TEST(GenerateMarket, ColdFlagsAreBernoulliBase) {
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = small_config(seed);
    c.n_blocks = 5;
    c.p_intra = 0.2;
    c.p_inter = 0.05;
    c.risk_regime = {RiskRegime::Kind::BlocksHot, 0.1, 0.5, {1, 2}};
    auto m = generate_market(c);
    double n = 0, ones = 0;
    for (std::size_t k = 0; k < m.table.size(); ++k) {
      if (m.contract_is_hot[k]) continue;
      n += 1;
      ones += m.table.records[k].single_bid;
    }
    const double e1 = 0.1 * n, e0 = 0.9 * n;
    const double chi2 = (ones - e1) * (ones - e1) / e1 + (n - ones - e0) * (n - ones - e0) / e0;
    passes += chi2 < 6.635;  // chi-square, 1 df, alpha 0.01
  }
  EXPECT_GE(passes, 45);
}

TEST(GenerateMarket, CpvClassesAndBids) {
  auto c = small_config(9);
  c.n_cpv_classes = 7;
  auto m = generate_market(c);
  std::map<std::string, int> classes;
  for (const auto& r : m.table.records) {
    ++classes[std::string(r.cpv.class2())];
    ASSERT_TRUE(r.n_bids.has_value());
    ASSERT_EQ(r.single_bid, *r.n_bids == 1);
    ASSERT_LE(*r.n_bids, 6);
  }
  EXPECT_EQ(classes.size(), 7u);
}

TEST(GenerateMarket, PowerLawWeightsStayInRange) {
  auto c = small_config(10);
  c.weight_law = {WeightLaw::Kind::PowerLaw, 1, 2.0, 20};
  auto g = MarketGraph::build(generate_market(c).table);
  std::int64_t max_w = 0;
  for (const auto& e : g.edges()) {
    ASSERT_GE(e.stats.weight, 1);
    max_w = std::max(max_w, e.stats.weight);
  }
  EXPECT_LE(max_w, 20);
  EXPECT_GT(max_w, 1);
}

TEST(SynthConfig, Validation) {
  auto c = small_config(1);
  c.p_inter = 0.5;
  c.p_intra = 0.1;
  EXPECT_THROW(generate_market(c), DataError);
  c = small_config(1);
  c.risk_regime = {RiskRegime::Kind::BlocksHot, 0.1, 0.5, {3}};
  EXPECT_THROW(generate_market(c), DataError);
  c = small_config(1);
  c.p_intra = c.p_inter = 0.0;
  EXPECT_THROW(generate_market(c), DataError);
  c = small_config(1);
  c.n_cpv_classes = 46;
  EXPECT_THROW(generate_market(c), DataError);
}

TEST(SynthConfig, FromKeyValues) {
  auto kv = KeyValueConfig::parse(
      "n_issuers = 30\nn_winners = 40\nn_blocks = 3\np_intra = 0.5\np_inter = 0.1\nweight_law = powerlaw:2.5:50\n"
      "hub_fraction = 0.1\nhub_weight_multiplier = 4\nrisk_regime = blocks_hot:0.1:0.6:0,2\nseed = 12\n");
  auto c = SynthConfig::from_config(kv);
  EXPECT_EQ(c.n_issuers, 30);
  EXPECT_EQ(c.n_blocks, 3);
  EXPECT_EQ(c.weight_law.kind, WeightLaw::Kind::PowerLaw);
  EXPECT_EQ(c.weight_law.max, 50);
  EXPECT_EQ(c.risk_regime.kind, RiskRegime::Kind::BlocksHot);
  EXPECT_EQ(c.risk_regime.hot_blocks, (std::vector<int>{0, 2}));
  EXPECT_EQ(c.seed, 12u);
  EXPECT_THROW(SynthConfig::from_config(KeyValueConfig::parse("risk_regime = spicy:1\n")), DataError);
}

}  // namespace
}  // namespace procnet
