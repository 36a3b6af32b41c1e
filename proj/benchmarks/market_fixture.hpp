#pragma once

#include <cstdint>

#include "procnet/graph.hpp"

namespace procnet::bench {

// Synthetic market with about `contracts` contracts on roughly a fifth as many
// edges, with a hub core and ten CPV classes. Cached per size.
const MarketGraph& market(std::int64_t contracts);

}  // namespace procnet::bench
