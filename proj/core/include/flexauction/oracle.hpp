#pragma once

#include <optional>
#include <span>
#include <vector>

#include "flexauction/market.hpp"

namespace flexauction {

struct OracleSolution {
    double value = 0.0;
    DecisionPair best;  // lexicographically smallest (xi, g) among optima
};

// Plain exhaustive search over every allocation vector and every purchase
// vector up to g_cap per class (default: one per consumer, which is always
// enough). Kept deliberately free of the allocator's ideas so the two can
// arbitrate each other. Guard: n <= 12 and the purchase grid at most ~2e6
// points, else SizeGuardError.
OracleSolution solve_exact(std::span<const double> w, std::span<const int> c,
                           const MarketStructure& market,
                           std::optional<long> g_cap = std::nullopt);

// Same search with purchases pinned to zero.
OracleSolution solve_exact_fixed_supply(std::span<const double> w, std::span<const int> c,
                                        const MarketStructure& market);

}  // namespace flexauction
