#include "procnet/market_stats.hpp"

#include <cmath>
#include <ostream>

#include "procnet/csv.hpp"

namespace procnet {

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments population_moments(const MarketGraph& g, NodeIndex first, NodeIndex last) {
  Moments m;
  const auto n = static_cast<double>(last - first);
  if (n == 0) return m;
  double sum = 0;
  for (NodeIndex v = first; v < last; ++v) sum += static_cast<double>(g.strength(v));
  m.mean = sum / n;
  double ss = 0;
  for (NodeIndex v = first; v < last; ++v) {
    const double d = static_cast<double>(g.strength(v)) - m.mean;
    ss += d * d;
  }
  m.std = std::sqrt(ss / n);
  return m;
}

// Sum over pairs of nodes in [first, last) of C(common neighbours, 2).
std::uint64_t four_cycles_over_pairs(const MarketGraph& g, NodeIndex first, NodeIndex last) {
  const auto other = [&](const MarketEdge& e, NodeIndex v) { return e.issuer == v ? e.winner : e.issuer; };
  std::vector<std::uint32_t> common(g.n_nodes(), 0);
  std::vector<NodeIndex> touched;
  std::uint64_t total = 0;
  for (NodeIndex u = first; u < last; ++u) {
    for (EdgeIndex e1 : g.incident(u)) {
      const NodeIndex mid = other(g.edge(e1), u);
      for (EdgeIndex e2 : g.incident(mid)) {
        const NodeIndex v = other(g.edge(e2), mid);
        if (v <= u) continue;
        if (common[v]++ == 0) touched.push_back(v);
      }
    }
    for (NodeIndex v : touched) {
      const std::uint64_t c = common[v];
      total += c * (c - 1) / 2;
      common[v] = 0;
    }
    touched.clear();
  }
  return total;
}

}  // namespace

CycleCounts count_cycles_and_paths(const MarketGraph& g) {
  CycleCounts counts;
  // Pairs on one side are enumerated through the other side; pick the cheaper.
  std::uint64_t cost_issuer_pairs = 0, cost_winner_pairs = 0;
  for (NodeIndex v = 0; v < g.n_nodes(); ++v) {
    const std::uint64_t d = g.degree(v);
    (g.is_issuer(v) ? cost_winner_pairs : cost_issuer_pairs) += d * d;
  }
  const auto n_i = static_cast<NodeIndex>(g.n_issuers());
  const auto n = static_cast<NodeIndex>(g.n_nodes());
  counts.four_cycles = cost_issuer_pairs <= cost_winner_pairs ? four_cycles_over_pairs(g, 0, n_i)
                                                              : four_cycles_over_pairs(g, n_i, n);
  for (const auto& e : g.edges()) {
    counts.three_paths += static_cast<std::uint64_t>(g.degree(e.issuer) - 1) * (g.degree(e.winner) - 1);
  }
  return counts;
}

std::optional<double> robins_alexander_clustering(const MarketGraph& graph, bool scaled) {
  const auto counts = count_cycles_and_paths(graph);
  if (counts.three_paths == 0) return std::nullopt;
  const double c4 = static_cast<double>(counts.four_cycles) * (scaled ? 4.0 : 1.0);
  return c4 / static_cast<double>(counts.three_paths);
}

MarketStats market_stats(const MarketGraph& g) {
  MarketStats s;
  s.n_contracts = static_cast<std::int64_t>(g.n_contracts());
  s.n_issuers = static_cast<std::int64_t>(g.n_issuers());
  s.n_winners = static_cast<std::int64_t>(g.n_winners());
  s.n_edges = static_cast<std::int64_t>(g.n_edges());
  s.density = static_cast<double>(g.n_edges()) / (static_cast<double>(g.n_issuers()) * static_cast<double>(g.n_winners()));
  s.ra_clustering = robins_alexander_clustering(g);
  const auto n_i = static_cast<NodeIndex>(g.n_issuers());
  const auto issuers = population_moments(g, 0, n_i);
  const auto winners = population_moments(g, n_i, static_cast<NodeIndex>(g.n_nodes()));
  s.mean_strength_issuers = issuers.mean;
  s.std_strength_issuers = issuers.std;
  s.mean_strength_winners = winners.mean;
  s.std_strength_winners = winners.std;
  s.n_risk_eligible = static_cast<std::int64_t>(g.n_risk_eligible());
  for (const auto& e : g.edges()) s.n_single_bid += e.stats.single_bid_count;
  if (s.n_risk_eligible > 0) {
    s.single_bidding_rate = static_cast<double>(s.n_single_bid) / static_cast<double>(s.n_risk_eligible);
  }
  return s;
}

void write_stats_header(std::ostream& out) {
  csv::write_row(out, {"country", "period", "n_contracts", "n_winners", "n_issuers", "n_edges", "density",
                       "ra_clustering", "mean_deg_w", "std_deg_w", "mean_deg_i", "std_deg_i", "single_bidding_rate"});
}

void write_stats_row(std::ostream& out, const std::string& country, const std::string& period, const MarketStats& s) {
  using csv::format_double;
  csv::write_row(out, {country, period, std::to_string(s.n_contracts), std::to_string(s.n_winners),
                       std::to_string(s.n_issuers), std::to_string(s.n_edges), format_double(s.density),
                       csv::format_optional(s.ra_clustering), format_double(s.mean_strength_winners),
                       format_double(s.std_strength_winners), format_double(s.mean_strength_issuers),
                       format_double(s.std_strength_issuers), csv::format_optional(s.single_bidding_rate)});
}

}  // namespace procnet
