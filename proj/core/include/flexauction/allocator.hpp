#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flexauction/market.hpp"

namespace flexauction {

// Everything the allocator derived on the way to a decision. Levels are
// 1-based in the domain; vectors here are indexed by level - 1. Consumers are
// identified by their index in the input arrays.
struct AllocationTrace {
    // Free-supply pass.
    std::vector<std::vector<int>> positive;       // class members with w > 0
    std::vector<std::vector<int>> pools;          // candidate pool per level
    std::vector<std::vector<int>> survivors;      // pool minus removals
    std::vector<long> removals;                   // r*_i
    std::vector<double> level_thresholds;         // largest removed w per level, 0 if none
    std::vector<std::vector<int>> served_free;    // served when nothing can be bought

    // Purchase pass.
    std::vector<long> purchases;                  // goods bought per class
    std::vector<std::vector<int>> served_by_purchase;  // newly served per class
    std::vector<double> class_thresholds;         // final virtual threshold per class
    std::vector<int> served;                      // final served consumers, ascending
};

// Free-supply pass: drop non-positive virtual valuations, then sweep levels
// 1..k keeping at most the cumulative free supply, removing the lowest
// valuations (ties: lower index first). A consumer is served here iff its
// valuation strictly clears zero and every level threshold from its class up.
AllocationTrace fixed_supply_thresholds(std::span<const double> w, std::span<const int> c,
                                        const MarketStructure& market,
                                        bool invert_ties = false);

// Exact optimum of the joint serve-and-buy program: max sum of served
// valuations minus purchase cost, subject to the cumulative feasibility
// constraints. Level DP over (served count, cumulative purchases); purchases
// are costed at the cheapest class that still covers each deficit.
double joint_optimum_value(std::span<const double> w, std::span<const int> c,
                           const MarketStructure& market,
                           std::span<const long> cumulative_supply = {});

// The same optimum with its serve plan reconstructed from the DP: how many
// consumers each class serves (always that class's highest valuations; ties
// prefer the lower index). Among equal-value optima the plan with the fewest
// served consumers is chosen, which is what a strict threshold rule would do.
// Membership decided here is exact; it never hinges on comparing recomputed
// sums that differ only in rounding.
struct JointPlan {
    double value = 0.0;
    std::vector<long> counts;  // served per class
};

JointPlan joint_optimum_plan(std::span<const double> w, std::span<const int> c,
                             const MarketStructure& market);

// Purchase pass. Extends the trace with the final served set (taken from the
// exact optimizer's plan), the cheapest purchase vector covering it, and the
// final class thresholds (marginal value of one extra good of each class,
// minimized over usable classes) that the payment rule inverts. Off ties the
// served set equals {w strictly above the class threshold}. Returns the
// purchases.
std::vector<long> purchase_rule(AllocationTrace& trace, std::span<const double> w,
                                std::span<const int> c, const MarketStructure& market);

// Final decision from a completed trace: xi from the trace's served set plus
// the per-consumer virtual thresholds.
// Raises InternalConsistencyError if the emitted pair fails is_feasible.
struct FinalAllocation {
    std::vector<std::uint8_t> xi;
    std::vector<double> vthr;  // per consumer, = class threshold of its report
};

FinalAllocation final_allocation(const AllocationTrace& trace, std::span<const double> w,
                                 std::span<const int> c, const MarketStructure& market);

// Convenience: all three passes. `invert_ties` flips the removal order among
// equal valuations in the free-supply pass (testing hook; the objective is
// unaffected).
struct AllocatorResult {
    AllocationTrace trace;
    FinalAllocation final;
    std::vector<long> purchases;
    double objective = 0.0;  // served valuations minus purchase cost
};

AllocatorResult run_allocator(std::span<const double> w, std::span<const int> c,
                              const MarketStructure& market, bool invert_ties = false);

}  // namespace flexauction
