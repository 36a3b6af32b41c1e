#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "procnet/ingest.hpp"
#include "procnet/kv_config.hpp"

namespace procnet {

struct WeightLaw {
  enum class Kind { Constant, PowerLaw };
  Kind kind = Kind::Constant;
  std::int64_t constant = 1;
  double exponent = 2.5;  // P(w) ~ w^-exponent on [1, max]
  std::int64_t max = 100;
};

struct RiskRegime {
  enum class Kind { Uniform, CoreHot, BlocksHot };
  Kind kind = Kind::Uniform;
  double p_base = 0.1;
  double p_hot = 0.1;
  std::vector<int> hot_blocks;  // BlocksHot only
};

/// Planted-structure market generator settings.
///
/// Issuers and winners are split evenly into blocks. A pair inside a block is
/// linked with p_intra, across blocks with p_inter. A hub_fraction of each
/// node class is promoted to hubs. Each hub endpoint multiplies the edge
/// weight by hub_weight_multiplier, so hub-hub edges carry the square of it
/// and form the planted core.
///
/// Risk regimes: CoreHot labels contracts on hub-hub edges with p_hot;
/// BlocksHot labels contracts on intra-block edges of hot blocks with p_hot;
/// everything else uses p_base.
struct SynthConfig {
  int n_issuers = 200;
  int n_winners = 800;
  int n_blocks = 1;
  double p_intra = 0.05;
  double p_inter = 0.05;
  WeightLaw weight_law;
  double hub_fraction = 0.0;
  std::int64_t hub_weight_multiplier = 1;
  int n_cpv_classes = 10;
  bool cpv_by_block = false;  // class = block mod n_cpv_classes instead of uniform
  RiskRegime risk_regime;
  std::uint64_t seed = 0;
  std::string country = "XX";
  int year = 2014;

  /// Throws DataError describing the first violated constraint.
  void validate() const;

  /// Keys: n_issuers, n_winners, n_blocks, p_intra, p_inter,
  /// weight_law ("constant:W" | "powerlaw:EXP:MAX"), hub_fraction,
  /// hub_weight_multiplier, n_cpv_classes, cpv_by_block,
  /// risk_regime ("uniform:P" | "core_hot:PBASE:PHOT" |
  /// "blocks_hot:PBASE:PHOT:B1,B2,..."), seed, country, year.
  static SynthConfig from_config(const KeyValueConfig& config);
};

/// Largest number of CPV classes the generator can label (real CPV divisions).
int max_cpv_classes();

struct SyntheticMarket {
  ContractTable table;
  std::vector<std::uint8_t> issuer_is_hub;
  std::vector<std::uint8_t> winner_is_hub;
  std::vector<int> issuer_block;
  std::vector<int> winner_block;
  /// Per contract (table order): 1 if it was labelled with p_hot.
  std::vector<std::uint8_t> contract_is_hot;
};

/// Deterministic given config.seed. Throws DataError when the expected
/// contract count is zero or nothing was generated.
SyntheticMarket generate_market(const SynthConfig& config);

/// Entity names used by the generator.
std::string synth_issuer_name(int index);
std::string synth_winner_name(int index);

}  // namespace procnet
