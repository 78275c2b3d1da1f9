#include "flexauction/oracle.hpp"

#include <algorithm>
#include <string>

#include "flexauction/feasibility.hpp"

namespace flexauction {

namespace {

bool lex_less(const DecisionPair& a, const DecisionPair& b) {
    if (a.xi != b.xi) return a.xi < b.xi;
    return a.g < b.g;
}

void guard_sizes(std::size_t n, long grid) {
    if (n > 12)
        throw SizeGuardError("oracle: refusing " + std::to_string(n) +
                             " consumers (limit 12)");
    if (grid > 2'000'000)
        throw SizeGuardError("oracle: purchase grid of " + std::to_string(grid) +
                             " combinations exceeds the limit");
}

}  // namespace

OracleSolution solve_exact(std::span<const double> w, std::span<const int> c,
                           const MarketStructure& market, std::optional<long> g_cap) {
    if (w.size() != c.size())
        throw ValidationError("oracle: w and c must have the same length");
    const std::size_t n = w.size();
    const int k = market.k();
    for (std::size_t l = 0; l < n; ++l)
        if (c[l] < 1 || c[l] > k)
            throw ValidationError("oracle: class out of range at consumer " +
                                  std::to_string(l));

    // A served consumer uses exactly one good, so no class ever needs more
    // purchases than there are consumers.
    const long cap = g_cap.value_or(static_cast<long>(n));
    if (cap < 0) throw ValidationError("oracle: purchase cap must be non-negative");
    long grid = 1;
    for (int i = 0; i < k; ++i) {
        if (grid > 2'000'000 / (cap + 1) + 1) {
            grid = 2'000'001;
            break;
        }
        grid *= cap + 1;
    }
    guard_sizes(n, grid);

    std::vector<int> cvec(c.begin(), c.end());
    OracleSolution best;
    best.value = 0.0;
    best.best.xi.assign(n, 0);
    best.best.g.assign(static_cast<std::size_t>(k), 0);
    bool have = false;

    DecisionPair cand;
    cand.xi.assign(n, 0);
    cand.g.assign(static_cast<std::size_t>(k), 0);
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        double served_value = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            cand.xi[l] = (mask >> l) & 1u ? 1 : 0;
            if (cand.xi[l]) served_value += w[l];
        }
        std::fill(cand.g.begin(), cand.g.end(), 0);
        while (true) {
            if (is_feasible(cand, cvec, market)) {
                double value = served_value;
                for (int i = 1; i <= k; ++i)
                    value -= market.price(i) *
                             static_cast<double>(cand.g[static_cast<std::size_t>(i - 1)]);
                if (!have || value > best.value ||
                    (value == best.value && lex_less(cand, best.best))) {
                    best.value = value;
                    best.best = cand;
                    have = true;
                }
            }
            int pos = 0;
            while (pos < k && cand.g[static_cast<std::size_t>(pos)] == cap) {
                cand.g[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == k) break;
            ++cand.g[static_cast<std::size_t>(pos)];
        }
    }
    return best;
}

OracleSolution solve_exact_fixed_supply(std::span<const double> w, std::span<const int> c,
                                        const MarketStructure& market) {
    return solve_exact(w, c, market, 0L);
}

}  // namespace flexauction
