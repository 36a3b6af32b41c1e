// Checks on the test-only reference implementations themselves.
#include <gtest/gtest.h>

#include <cmath>

#include "procnet/correlation.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace procnet {
namespace {

TEST(Oracles, ZetaSamplerMatchesPmf) {
  Rng rng(1);
  const double alpha = 2.5;
  const int n = 200000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < n; ++i) {
    auto x = test::sample_zeta(rng, alpha);
    if (x <= 5) ++counts[x];
  }
  const double z = test::direct_hurwitz_zeta(alpha, 1.0);
  for (int k = 1; k <= 5; ++k) {
    const double p = std::pow(k, -alpha) / z;
    EXPECT_NEAR(counts[k] / static_cast<double>(n), p, 4 * std::sqrt(p * (1 - p) / n)) << k;
  }
}

TEST(Oracles, BivariateNormalHasRequestedCorrelation) {
  Rng rng(2);
  auto [x, y] = test::bivariate_normal(rng, 100000, 0.7);
  EXPECT_NEAR(pearson(x, y), 0.7, 0.01);
}

TEST(Oracles, BruteCoreOnHandExample) {
  auto g = test::make_graph({{1, 1, 5}, {1, 2, 1}, {2, 2, 1}});
  auto core = test::brute_core_numbers(g);
  EXPECT_EQ(core[g.find_node(Role::Issuer, "I1")], 5);
  EXPECT_EQ(core[g.find_node(Role::Issuer, "I2")], 1);
}

TEST(Oracles, BruteCyclesOnCompleteBipartite) {
  auto c = test::brute_cycles_and_paths(test::make_graph(test::complete_bipartite(3, 4)));
  EXPECT_EQ(c.four_cycles, 3u * 6u);                 // C(3,2) * C(4,2)
  EXPECT_EQ(c.three_paths, 3u * 4u * 2u * 3u);       // edges * (deg_u - 1)(deg_v - 1)
}

}  // namespace
}  // namespace procnet
