#include "flexauction/feasibility.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace flexauction {

namespace {

void validate_pair(const DecisionPair& d, const std::vector<int>& c,
                   const MarketStructure& market) {
    if (d.xi.size() != c.size())
        throw ValidationError("feasibility: xi and c must have the same length");
    if (d.g.size() != static_cast<std::size_t>(market.k()))
        throw ValidationError("feasibility: g must have k entries");
    for (long gj : d.g)
        if (gj < 0) throw ValidationError("feasibility: purchases must be non-negative");
    for (std::size_t l = 0; l < c.size(); ++l)
        if (c[l] < 1 || c[l] > market.k())
            throw ValidationError("feasibility: class out of range at consumer " +
                                  std::to_string(l));
}

}  // namespace

bool is_feasible(const DecisionPair& d, const std::vector<int>& c,
                 const MarketStructure& market) {
    validate_pair(d, c, market);
    int k = market.k();
    std::vector<long> served(static_cast<std::size_t>(k), 0);
    for (std::size_t l = 0; l < c.size(); ++l)
        if (d.xi[l]) ++served[static_cast<std::size_t>(c[l] - 1)];
    long demand = 0, supply = 0;
    for (int i = 1; i <= k; ++i) {
        demand += served[static_cast<std::size_t>(i - 1)];
        supply += market.free_supply(i) + d.g[static_cast<std::size_t>(i - 1)];
        if (demand > supply) return false;
    }
    return true;
}

WitnessAssignment witness_assignment(const DecisionPair& d, const std::vector<int>& c,
                                     const MarketStructure& market) {
    validate_pair(d, c, market);
    int k = market.k();
    std::vector<long> free_left(static_cast<std::size_t>(k));
    std::vector<long> bought_left(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        free_left[static_cast<std::size_t>(j - 1)] = market.free_supply(j);
        bought_left[static_cast<std::size_t>(j - 1)] = d.g[static_cast<std::size_t>(j - 1)];
    }

    std::vector<int> order;
    for (std::size_t l = 0; l < c.size(); ++l)
        if (d.xi[l]) order.push_back(static_cast<int>(l));
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return c[static_cast<std::size_t>(a)] < c[static_cast<std::size_t>(b)]; });

    // Consumers in ascending class order may take any suitable good without
    // hurting the rest: everyone later is at least as flexible. The preference
    // order below keeps purchased goods with their own class whenever the pair
    // came out of the optimizer.
    WitnessAssignment witness;
    std::vector<WitnessSlot> by_consumer(c.size());
    for (int l : order) {
        int cls = c[static_cast<std::size_t>(l)];
        int taken = 0;
        for (int j = 1; j <= cls && taken == 0; ++j)
            if (free_left[static_cast<std::size_t>(j - 1)] > 0) {
                --free_left[static_cast<std::size_t>(j - 1)];
                by_consumer[static_cast<std::size_t>(l)] = WitnessSlot{l, j, false};
                taken = j;
            }
        if (taken == 0 && bought_left[static_cast<std::size_t>(cls - 1)] > 0) {
            --bought_left[static_cast<std::size_t>(cls - 1)];
            by_consumer[static_cast<std::size_t>(l)] = WitnessSlot{l, cls, true};
            taken = cls;
        }
        for (int j = 1; j <= cls && taken == 0; ++j)
            if (bought_left[static_cast<std::size_t>(j - 1)] > 0) {
                --bought_left[static_cast<std::size_t>(j - 1)];
                by_consumer[static_cast<std::size_t>(l)] = WitnessSlot{l, j, true};
                taken = j;
            }
        if (taken == 0) return witness;  // incomplete: the pair is infeasible
    }

    witness.complete = true;
    for (std::size_t l = 0; l < c.size(); ++l)
        if (d.xi[l]) witness.slots.push_back(by_consumer[l]);
    return witness;
}

}  // namespace flexauction
