#include "market_fixture.hpp"

#include <cmath>
#include <map>

#include "procnet/synth.hpp"

namespace procnet::bench {

const MarketGraph& market(std::int64_t contracts) {
  static std::map<std::int64_t, MarketGraph> cache;
  if (auto it = cache.find(contracts); it != cache.end()) return it->second;

  // 400 x 500 at p = 0.1 with multiplier 13 gives about 100k contracts.
  const double scale = std::sqrt(static_cast<double>(contracts) / 100'000.0);
  SynthConfig config;
  config.n_issuers = std::max(10, static_cast<int>(400 * scale));
  config.n_winners = std::max(10, static_cast<int>(500 * scale));
  config.p_intra = config.p_inter = 0.1;
  config.hub_fraction = 0.1;
  config.hub_weight_multiplier = 13;
  config.risk_regime = {RiskRegime::Kind::Uniform, 0.1, 0.1, {}};
  config.seed = 1;
  return cache.emplace(contracts, MarketGraph::build(generate_market(config).table)).first->second;
}

}  // namespace procnet::bench
