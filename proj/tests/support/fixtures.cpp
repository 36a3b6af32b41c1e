#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>

namespace procnet::test {

ContractRecord make_record(std::string id, std::string issuer, std::string winner, int bids, std::string cpv,
                           std::string country, int year) {
  ContractRecord r;
  r.contract_id = std::move(id);
  r.country = std::move(country);
  r.year = year;
  r.issuer_raw = r.issuer_id = std::move(issuer);
  r.winner_raw = r.winner_id = std::move(winner);
  r.cpv = *CpvCode::parse(cpv);
  r.n_bids = bids;
  r.single_bid = bids == 1;
  return r;
}

ContractTable make_table(std::span<const TestEdge> edges, const std::string& country, int year) {
  ContractTable table;
  int next = 0;
  for (const auto& e : edges) {
    for (int k = 0; k < e.weight; ++k) {
      table.records.push_back(make_record("c" + std::to_string(next++), "I" + std::to_string(e.issuer),
                                          "W" + std::to_string(e.winner), k < e.single_bids ? 1 : 3, e.cpv, country,
                                          year));
    }
  }
  table.provenance.rows_read = table.records.size();
  return table;
}

MarketGraph make_graph(std::span<const TestEdge> edges) { return MarketGraph::build(make_table(edges)); }

MarketGraph make_graph(std::initializer_list<TestEdge> edges) {
  return make_graph(std::span<const TestEdge>(edges.begin(), edges.size()));
}

std::vector<TestEdge> complete_bipartite(int m, int n, int weight) {
  std::vector<TestEdge> edges;
  for (int i = 0; i < m; ++i) {
    for (int w = 0; w < n; ++w) edges.push_back({i, w, weight});
  }
  return edges;
}

std::vector<TestEdge> random_bipartite(Rng& rng, int max_nodes, int max_weight, double p) {
  while (true) {
    const int n_i = 1 + static_cast<int>(uniform_below(rng, max_nodes - 1));
    const int n_w = 1 + static_cast<int>(uniform_below(rng, max_nodes - n_i));
    std::vector<TestEdge> edges;
    for (int i = 0; i < n_i; ++i) {
      for (int w = 0; w < n_w; ++w) {
        if (bernoulli(rng, p)) edges.push_back({i, w, 1 + static_cast<int>(uniform_below(rng, max_weight))});
      }
    }
    if (!edges.empty()) return edges;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace procnet::test

namespace procnet::test {

std::vector<TestEdge> two_k33_with_bridge() {
  std::vector<TestEdge> edges;
  for (int block = 0; block < 2; ++block) {
    for (int i = 0; i < 3; ++i) {
      for (int w = 0; w < 3; ++w) edges.push_back({3 * block + i, 3 * block + w});
    }
  }
  edges.push_back({2, 3});
  return edges;
}

double co_membership_agreement(std::span<const int> planted, std::span<const std::uint32_t> found) {
  std::size_t pairs = 0, agree = 0;
  for (std::size_t a = 0; a < planted.size(); ++a) {
    if (planted[a] < 0) continue;
    for (std::size_t b = a + 1; b < planted.size(); ++b) {
      if (planted[b] < 0) continue;
      ++pairs;
      if ((planted[a] == planted[b]) == (found[a] == found[b])) ++agree;
    }
  }
  return pairs == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(pairs);
}

}  // namespace procnet::test
