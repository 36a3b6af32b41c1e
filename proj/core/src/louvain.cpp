#include "procnet/louvain.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "procnet/csv.hpp"
#include "procnet/rng.hpp"

namespace procnet {

namespace {

// Weighted graph of one Louvain level. Self-loop mass is kept apart from the
// adjacency lists and counts each internal edge twice, matching strengths.
struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> neighbors;
  std::vector<double> weights;
  std::vector<double> self_mass;
  std::vector<double> strength;
  double total = 0.0;  // sum of strengths, 2m

  std::size_t size() const { return strength.size(); }
};

LevelGraph from_line_graph(const LineGraph& lg) {
  LevelGraph g;
  const auto n = lg.n_nodes();
  g.offsets.resize(n + 1);
  g.offsets[0] = 0;
  for (std::size_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + lg.degree(v);
  g.neighbors.reserve(g.offsets.back());
  for (std::size_t v = 0; v < n; ++v) {
    auto nb = lg.neighbors(v);
    g.neighbors.insert(g.neighbors.end(), nb.begin(), nb.end());
  }
  g.weights.assign(g.neighbors.size(), 1.0);
  g.self_mass.assign(n, 0.0);
  g.strength.resize(n);
  for (std::size_t v = 0; v < n; ++v) g.strength[v] = static_cast<double>(lg.degree(v));
  g.total = static_cast<double>(g.neighbors.size());
  return g;
}

// One local-moving phase. Returns true if any node changed community.
bool move_nodes(const LevelGraph& g, Rng& rng, std::vector<std::uint32_t>& community) {
  const auto n = g.size();
  community.resize(n);
  std::iota(community.begin(), community.end(), 0u);
  std::vector<double> tot(g.strength);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  fisher_yates(std::span<std::uint32_t>(order), rng);

  std::vector<double> link(n, 0.0);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> candidates;
  bool moved_any = false;

  for (;;) {
    std::size_t moves = 0;
    for (std::uint32_t v : order) {
      const std::uint32_t home = community[v];
      const double k = g.strength[v];
      candidates.clear();
      candidates.push_back(home);
      seen[home] = 1;
      for (std::size_t a = g.offsets[v]; a < g.offsets[v + 1]; ++a) {
        const std::uint32_t c = community[g.neighbors[a]];
        if (!seen[c]) {
          seen[c] = 1;
          candidates.push_back(c);
        }
        link[c] += g.weights[a];
      }

      tot[home] -= k;
      std::uint32_t best = home;
      double best_gain = link[home] - tot[home] * k / g.total;
      const double eps = 1e-10 * std::max(1.0, k);
      for (std::uint32_t c : candidates) {
        const double gain = link[c] - tot[c] * k / g.total;
        if (gain > best_gain + eps) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += k;
      community[v] = best;
      if (best != home) ++moves;

      for (std::uint32_t c : candidates) {
        link[c] = 0.0;
        seen[c] = 0;
      }
    }
    if (moves == 0) break;
    moved_any = true;
  }
  return moved_any;
}

// Renumbers to dense ids by first appearance; returns the community count.
std::size_t renumber(std::vector<std::uint32_t>& community) {
  std::vector<std::uint32_t> id(community.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : community) {
    if (id[c] == UINT32_MAX) id[c] = next++;
    c = id[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& community, std::size_t k) {
  LevelGraph out;
  out.self_mass.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  out.total = g.total;

  std::vector<std::vector<std::uint32_t>> members(k);
  for (std::uint32_t v = 0; v < g.size(); ++v) members[community[v]].push_back(v);

  std::vector<double> link(k, 0.0);
  std::vector<std::uint8_t> seen(k, 0);
  std::vector<std::uint32_t> touched;
  out.offsets.assign(k + 1, 0);
  for (std::uint32_t c = 0; c < k; ++c) {
    touched.clear();
    for (std::uint32_t v : members[c]) {
      out.self_mass[c] += g.self_mass[v];
      out.strength[c] += g.strength[v];
      for (std::size_t a = g.offsets[v]; a < g.offsets[v + 1]; ++a) {
        const std::uint32_t d = community[g.neighbors[a]];
        if (d == c) {
          out.self_mass[c] += g.weights[a];
          continue;
        }
        if (!seen[d]) {
          seen[d] = 1;
          touched.push_back(d);
        }
        link[d] += g.weights[a];
      }
    }
    for (std::uint32_t d : touched) {
      out.neighbors.push_back(d);
      out.weights.push_back(link[d]);
      link[d] = 0.0;
      seen[d] = 0;
    }
    out.offsets[c + 1] = out.neighbors.size();
  }
  return out;
}

// Among partitions of equal modularity prefer fewer communities: merge
// adjacent communities while some merge does not lower Q. Local moving only
// accepts strict gains, so without this pass ties (common in the symmetric
// line graphs of complete blocks) leave arbitrary splits behind.
void merge_ties(const LineGraph& graph, std::vector<std::uint32_t>& community) {
  const LevelGraph base = from_line_graph(graph);
  for (;;) {
    const auto k = renumber(community);
    const LevelGraph g = aggregate(base, community, k);
    std::uint32_t best_c = 0, best_d = 0;
    double best = 0.0;
    bool found = false;
    for (std::uint32_t c = 0; c < k; ++c) {
      const double eps = 1e-10 * std::max(1.0, g.strength[c]);
      for (std::size_t a = g.offsets[c]; a < g.offsets[c + 1]; ++a) {
        const std::uint32_t d = g.neighbors[a];
        if (d <= c) continue;
        const double gain = g.weights[a] - g.strength[c] * g.strength[d] / g.total;
        if (gain >= -eps && (!found || gain > best + eps)) {
          found = true;
          best = gain;
          best_c = c;
          best_d = d;
        }
      }
    }
    if (!found) return;
    for (auto& c : community) {
      if (c == best_d) c = best_c;
    }
  }
}

}  // namespace

double modularity(const LineGraph& graph, std::span<const std::uint32_t> community) {
  const auto m = static_cast<double>(graph.n_edges());
  if (m == 0) return 0.0;
  const auto k = community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
  std::vector<double> internal(k, 0.0), degree(k, 0.0);
  for (std::size_t v = 0; v < graph.n_nodes(); ++v) {
    const auto c = community[v];
    degree[c] += static_cast<double>(graph.degree(v));
    for (auto u : graph.neighbors(v)) {
      if (u > v && community[u] == c) internal[c] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += internal[c] / m - share * share;
  }
  return q;
}

EdgePartition louvain(const LineGraph& graph, std::uint64_t seed) {
  EdgePartition result;
  const auto n = graph.n_nodes();
  result.community.resize(n);
  std::iota(result.community.begin(), result.community.end(), 0u);

  if (graph.n_edges() > 0) {
    Rng rng(seed);
    LevelGraph level = from_line_graph(graph);
    std::vector<std::uint32_t> community;
    while (move_nodes(level, rng, community)) {
      const auto k = renumber(community);
      for (auto& c : result.community) c = community[c];
      if (k == level.size()) break;
      level = aggregate(level, community, k);
    }
    merge_ties(graph, result.community);
  }
  result.n_communities = renumber(result.community);
  result.modularity = modularity(graph, result.community);
  return result;
}

void write_partition_csv(std::ostream& out, const MarketGraph& graph, const EdgePartition& partition) {
  csv::write_row(out, {"issuer_id", "winner_id", "community"});
  for (EdgeIndex e = 0; e < graph.n_edges(); ++e) {
    const auto& edge = graph.edge(e);
    csv::write_row(out, {graph.node_id(edge.issuer), graph.node_id(edge.winner), std::to_string(partition.community[e])});
  }
}

}  // namespace procnet
