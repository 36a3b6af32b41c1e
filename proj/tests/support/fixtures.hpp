#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "procnet/graph.hpp"
#include "procnet/ingest.hpp"
#include "procnet/rng.hpp"

namespace procnet::test {

// One issuer-winner pair with `weight` contracts, the first `single_bids` of
// them single-bid. Issuers are named I<k>, winners W<k>.
struct TestEdge {
  int issuer = 0;
  int winner = 0;
  int weight = 1;
  int single_bids = 0;
  std::string cpv = "45000000";
};

ContractRecord make_record(std::string id, std::string issuer, std::string winner, int bids,
                           std::string cpv = "45000000", std::string country = "XX", int year = 2014);

ContractTable make_table(std::span<const TestEdge> edges, const std::string& country = "XX", int year = 2014);
MarketGraph make_graph(std::span<const TestEdge> edges);
MarketGraph make_graph(std::initializer_list<TestEdge> edges);

std::vector<TestEdge> complete_bipartite(int m, int n, int weight = 1);

// Random bipartite graph with at most max_nodes nodes, integer weights in
// [1, max_weight] and at least one edge. Isolated nodes are dropped.
std::vector<TestEdge> random_bipartite(Rng& rng, int max_nodes = 12, int max_weight = 5, double p = 0.5);

std::string read_file(const std::string& path);

}  // namespace procnet::test

namespace procnet::test {

// Two K_{3,3} blocks (issuers 0-2 / winners 0-2 and issuers 3-5 / winners 3-5)
// joined by the bridge edge I2-W3.
std::vector<TestEdge> two_k33_with_bridge();

// Fraction of item pairs on which "same planted label" and "same found label"
// agree. Items with a negative planted label are skipped.
double co_membership_agreement(std::span<const int> planted, std::span<const std::uint32_t> found);

}  // namespace procnet::test
