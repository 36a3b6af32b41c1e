#include "procnet/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "procnet/errors.hpp"
#include "procnet/rng.hpp"

namespace procnet {

namespace {

// Real two-digit CPV divisions, so synthetic files look like procurement data.
constexpr std::array<const char*, 45> kCpvDivisions = {
    "03", "09", "14", "15", "16", "18", "19", "22", "24", "30", "31", "32", "33", "34", "35",
    "37", "38", "39", "41", "42", "43", "44", "45", "48", "50", "51", "55", "60", "63", "64",
    "65", "66", "70", "71", "72", "73", "75", "76", "77", "79", "80", "85", "90", "92", "98"};

std::vector<std::string> split_fields(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto end = text.find(':', start);
    out.push_back(trim(std::string_view(text).substr(start, end == std::string::npos ? std::string::npos : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

double to_double(const std::string& s, std::string_view what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("invalid number '" + s + "' in " + std::string(what));
  }
}

std::vector<int> block_assignment(int n, int n_blocks) {
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) block[i] = static_cast<int>(static_cast<long long>(i) * n_blocks / n);
  return block;
}

std::vector<std::uint8_t> pick_hubs(int n, double fraction, Rng& rng) {
  std::vector<std::uint8_t> hub(static_cast<std::size_t>(n), 0);
  const auto k = static_cast<std::size_t>(std::llround(fraction * n));
  std::vector<std::uint32_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0u);
  fisher_yates(std::span<std::uint32_t>(order), rng);
  for (std::size_t i = 0; i < k && i < order.size(); ++i) hub[order[i]] = 1;
  return hub;
}

}  // namespace

int max_cpv_classes() { return static_cast<int>(kCpvDivisions.size()); }

void SynthConfig::validate() const {
  auto fail = [](const std::string& m) { throw DataError("synth config: " + m); };
  if (n_issuers <= 0 || n_winners <= 0) fail("n_issuers and n_winners must be positive");
  if (n_blocks <= 0 || n_blocks > std::min(n_issuers, n_winners)) fail("n_blocks must be in [1, min(n_issuers, n_winners)]");
  for (double p : {p_intra, p_inter, hub_fraction, risk_regime.p_base, risk_regime.p_hot}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities and hub_fraction must lie in [0, 1]");
  }
  if (p_inter > p_intra) fail("p_inter must not exceed p_intra");
  if (hub_weight_multiplier < 1) fail("hub_weight_multiplier must be >= 1");
  if (n_cpv_classes < 1 || n_cpv_classes > max_cpv_classes()) {
    fail("n_cpv_classes must be in [1, " + std::to_string(max_cpv_classes()) + "]");
  }
  if (weight_law.kind == WeightLaw::Kind::Constant && weight_law.constant < 1) fail("constant weight must be >= 1");
  if (weight_law.kind == WeightLaw::Kind::PowerLaw && (weight_law.max < 1 || weight_law.exponent <= 0)) {
    fail("power-law weights need exponent > 0 and max >= 1");
  }
  for (int b : risk_regime.hot_blocks) {
    if (b < 0 || b >= n_blocks) fail("hot block " + std::to_string(b) + " is not a block");
  }
  if (country.empty()) fail("country must not be empty");
}

SynthConfig SynthConfig::from_config(const KeyValueConfig& c) {
  SynthConfig s;
  auto get_int = [&](const char* key, auto& target) {
    if (auto v = c.get_int(key)) target = static_cast<std::remove_reference_t<decltype(target)>>(*v);
  };
  get_int("n_issuers", s.n_issuers);
  get_int("n_winners", s.n_winners);
  get_int("n_blocks", s.n_blocks);
  get_int("hub_weight_multiplier", s.hub_weight_multiplier);
  get_int("n_cpv_classes", s.n_cpv_classes);
  get_int("year", s.year);
  if (auto v = c.get_int("seed")) s.seed = static_cast<std::uint64_t>(*v);
  if (auto v = c.get_double("p_intra")) s.p_intra = *v;
  if (auto v = c.get_double("p_inter")) s.p_inter = *v;
  if (auto v = c.get_double("hub_fraction")) s.hub_fraction = *v;
  if (auto v = c.get_bool("cpv_by_block")) s.cpv_by_block = *v;
  if (auto v = c.get("country")) s.country = *v;

  if (auto v = c.get("weight_law")) {
    const auto f = split_fields(*v);
    if (f[0] == "constant" && f.size() == 2) {
      s.weight_law.kind = WeightLaw::Kind::Constant;
      s.weight_law.constant = static_cast<std::int64_t>(to_double(f[1], "weight_law"));
    } else if (f[0] == "powerlaw" && f.size() == 3) {
      s.weight_law.kind = WeightLaw::Kind::PowerLaw;
      s.weight_law.exponent = to_double(f[1], "weight_law");
      s.weight_law.max = static_cast<std::int64_t>(to_double(f[2], "weight_law"));
    } else {
      throw DataError("weight_law must be constant:W or powerlaw:EXPONENT:MAX");
    }
  }
  if (auto v = c.get("risk_regime")) {
    const auto f = split_fields(*v);
    auto& r = s.risk_regime;
    if (f[0] == "uniform" && f.size() == 2) {
      r.kind = RiskRegime::Kind::Uniform;
      r.p_base = r.p_hot = to_double(f[1], "risk_regime");
    } else if (f[0] == "core_hot" && f.size() == 3) {
      r.kind = RiskRegime::Kind::CoreHot;
      r.p_base = to_double(f[1], "risk_regime");
      r.p_hot = to_double(f[2], "risk_regime");
    } else if (f[0] == "blocks_hot" && f.size() == 4) {
      r.kind = RiskRegime::Kind::BlocksHot;
      r.p_base = to_double(f[1], "risk_regime");
      r.p_hot = to_double(f[2], "risk_regime");
      for (const auto& b : split_list(f[3])) r.hot_blocks.push_back(static_cast<int>(to_double(b, "hot blocks")));
    } else {
      throw DataError("risk_regime must be uniform:P, core_hot:PBASE:PHOT or blocks_hot:PBASE:PHOT:B1,B2,...");
    }
  }
  return s;
}

std::string synth_issuer_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "Issuer %05d", index);
  return buf;
}

std::string synth_winner_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "Winner %05d", index);
  return buf;
}

SyntheticMarket generate_market(const SynthConfig& config) {
  config.validate();
  SyntheticMarket m;
  m.issuer_block = block_assignment(config.n_issuers, config.n_blocks);
  m.winner_block = block_assignment(config.n_winners, config.n_blocks);

  double intra_pairs = 0;
  {
    std::vector<double> ib(config.n_blocks, 0), wb(config.n_blocks, 0);
    for (int b : m.issuer_block) ++ib[b];
    for (int b : m.winner_block) ++wb[b];
    for (int b = 0; b < config.n_blocks; ++b) intra_pairs += ib[b] * wb[b];
  }
  const double all_pairs = static_cast<double>(config.n_issuers) * config.n_winners;
  if (intra_pairs * config.p_intra + (all_pairs - intra_pairs) * config.p_inter <= 0) {
    throw DataError("synth config: expected contract count is zero");
  }

  Rng rng(config.seed);
  m.issuer_is_hub = pick_hubs(config.n_issuers, config.hub_fraction, rng);
  m.winner_is_hub = pick_hubs(config.n_winners, config.hub_fraction, rng);

  std::vector<double> weight_cdf;
  if (config.weight_law.kind == WeightLaw::Kind::PowerLaw) {
    weight_cdf.resize(static_cast<std::size_t>(config.weight_law.max));
    double acc = 0;
    for (std::int64_t w = 1; w <= config.weight_law.max; ++w) {
      acc += std::pow(static_cast<double>(w), -config.weight_law.exponent);
      weight_cdf[w - 1] = acc;
    }
    for (auto& v : weight_cdf) v /= acc;
  }
  auto draw_weight = [&]() -> std::int64_t {
    if (config.weight_law.kind == WeightLaw::Kind::Constant) return config.weight_law.constant;
    const double u = uniform01(rng);
    auto it = std::upper_bound(weight_cdf.begin(), weight_cdf.end(), u);
    return std::min<std::int64_t>(static_cast<std::int64_t>(it - weight_cdf.begin()) + 1, config.weight_law.max);
  };

  const std::set<int> hot_blocks(config.risk_regime.hot_blocks.begin(), config.risk_regime.hot_blocks.end());
  std::vector<std::string> issuer_names(config.n_issuers), winner_names(config.n_winners);
  for (int i = 0; i < config.n_issuers; ++i) issuer_names[i] = synth_issuer_name(i);
  for (int w = 0; w < config.n_winners; ++w) winner_names[w] = synth_winner_name(w);

  auto& records = m.table.records;
  char id[32];
  for (int i = 0; i < config.n_issuers; ++i) {
    for (int w = 0; w < config.n_winners; ++w) {
      const bool same_block = m.issuer_block[i] == m.winner_block[w];
      if (!bernoulli(rng, same_block ? config.p_intra : config.p_inter)) continue;
      const bool hub_edge = m.issuer_is_hub[i] && m.winner_is_hub[w];
      std::int64_t weight = draw_weight();
      if (m.issuer_is_hub[i]) weight *= config.hub_weight_multiplier;
      if (m.winner_is_hub[w]) weight *= config.hub_weight_multiplier;

      bool hot = false;
      switch (config.risk_regime.kind) {
        case RiskRegime::Kind::Uniform: break;
        case RiskRegime::Kind::CoreHot: hot = hub_edge; break;
        case RiskRegime::Kind::BlocksHot: hot = same_block && hot_blocks.contains(m.issuer_block[i]); break;
      }
      const double p = hot ? config.risk_regime.p_hot : config.risk_regime.p_base;

      for (std::int64_t k = 0; k < weight; ++k) {
        ContractRecord r;
        std::snprintf(id, sizeof id, "c%08zu", records.size() + 1);
        r.contract_id = id;
        r.country = config.country;
        r.year = config.year;
        r.issuer_raw = r.issuer_id = issuer_names[i];
        r.winner_raw = r.winner_id = winner_names[w];
        const auto cls = config.cpv_by_block ? m.issuer_block[i] % config.n_cpv_classes
                                             : static_cast<int>(uniform_below(rng, config.n_cpv_classes));
        r.cpv = *CpvCode::parse(std::string(kCpvDivisions[cls]) + "000000");
        r.single_bid = bernoulli(rng, p);
        r.n_bids = r.single_bid ? 1 : 2 + static_cast<int>(uniform_below(rng, 5));
        records.push_back(std::move(r));
        m.contract_is_hot.push_back(hot ? 1 : 0);
      }
    }
  }
  if (records.empty()) throw DataError("synth config produced no contracts");
  m.table.provenance.source = "synth:seed=" + std::to_string(config.seed);
  m.table.provenance.rows_read = records.size();
  return m;
}

}  // namespace procnet
