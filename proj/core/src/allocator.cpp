#include "flexauction/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "flexauction/feasibility.hpp"

namespace flexauction {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_inputs(std::span<const double> w, std::span<const int> c,
                     const MarketStructure& market) {
    if (w.size() != c.size())
        throw ValidationError("allocator: w and c must have the same length");
    for (std::size_t l = 0; l < c.size(); ++l)
        if (c[l] < 1 || c[l] > market.k())
            throw ValidationError("allocator: class out of range at consumer " +
                                  std::to_string(l));
}

// Per class: members with positive valuation ordered best-first (ties: lower
// index), plus prefix sums. Serving t of a class is only ever worth its top t.
struct ClassGains {
    std::vector<int> members;
    std::vector<double> prefix;
};

std::vector<ClassGains> collect_gains(std::span<const double> w, std::span<const int> c,
                                      int k) {
    std::vector<ClassGains> gains(static_cast<std::size_t>(k));
    for (std::size_t l = 0; l < c.size(); ++l)
        if (w[l] > 0.0)
            gains[static_cast<std::size_t>(c[l] - 1)].members.push_back(static_cast<int>(l));
    for (auto& gi : gains) {
        std::sort(gi.members.begin(), gi.members.end(), [&](int a, int b) {
            double wa = w[static_cast<std::size_t>(a)];
            double wb = w[static_cast<std::size_t>(b)];
            if (wa != wb) return wa > wb;
            return a < b;
        });
        gi.prefix.assign(gi.members.size() + 1, 0.0);
        for (std::size_t t = 0; t < gi.members.size(); ++t)
            gi.prefix[t + 1] = gi.prefix[t] + w[static_cast<std::size_t>(gi.members[t])];
    }
    return gains;
}

// Level DP over (served so far, cumulative purchases so far). Cumulative
// purchases at level i must reach B_i = max(B_{i-1}, s_i - M_i); the cheapest
// covering cost telescopes to sum_i (p_i - p_{i+1}) B_i with p_{k+1} = 0.
// Iteration order plus strict improvement make every tie-break deterministic:
// among equal-value optima the final state with the smallest (served, bought)
// wins, and within a state the smallest class count.
struct DpCore {
    double value = 0.0;
    long s = 0;
    long b = 0;
    // Flattened (s, b) -> chosen class count / previous b, one slab per level.
    std::vector<std::vector<long>> parent_t;
    std::vector<std::vector<long>> parent_b;
    std::size_t width = 1;
};

DpCore run_dp(const std::vector<ClassGains>& gains, const MarketStructure& market,
              std::span<const long> cumulative_supply, bool track) {
    const int k = market.k();
    auto cum = [&](int i) {
        return cumulative_supply.empty() ? market.cumulative_supply(i)
                                         : cumulative_supply[static_cast<std::size_t>(i - 1)];
    };

    long total = 0;
    for (const auto& gi : gains) total += static_cast<long>(gi.members.size());
    long neg = 0;
    for (int i = 1; i <= k; ++i) neg = std::max(neg, -cum(i));
    const long bmax = total + neg;

    DpCore core;
    core.width = static_cast<std::size_t>(bmax) + 1;
    const std::size_t cells = static_cast<std::size_t>(total + 1) * core.width;
    std::vector<double> cur(cells, kNegInf);
    std::vector<double> next(cells, kNegInf);
    cur[0] = 0.0;
    if (track) {
        core.parent_t.assign(static_cast<std::size_t>(k), {});
        core.parent_b.assign(static_cast<std::size_t>(k), {});
    }

    long reachable = 0;
    for (int i = 1; i <= k; ++i) {
        const auto& pi = gains[static_cast<std::size_t>(i - 1)].prefix;
        const long fresh = static_cast<long>(pi.size()) - 1;
        const double pd = market.price(i) - (i < k ? market.price(i + 1) : 0.0);
        const long mi = cum(i);
        std::fill(next.begin(), next.end(), kNegInf);
        long* pt = nullptr;
        long* pb = nullptr;
        if (track) {
            core.parent_t[static_cast<std::size_t>(i - 1)].assign(cells, -1);
            core.parent_b[static_cast<std::size_t>(i - 1)].assign(cells, -1);
            pt = core.parent_t[static_cast<std::size_t>(i - 1)].data();
            pb = core.parent_b[static_cast<std::size_t>(i - 1)].data();
        }
        for (long s = 0; s <= reachable; ++s)
            for (long b = 0; b <= bmax; ++b) {
                double base = cur[static_cast<std::size_t>(s) * core.width +
                                  static_cast<std::size_t>(b)];
                if (base == kNegInf) continue;
                for (long t = 0; t <= fresh; ++t) {
                    long s2 = s + t;
                    long b2 = std::max(b, s2 - mi);
                    std::size_t cell = static_cast<std::size_t>(s2) * core.width +
                                       static_cast<std::size_t>(b2);
                    double val = base + pi[static_cast<std::size_t>(t)] -
                                 pd * static_cast<double>(b2);
                    if (val > next[cell]) {
                        next[cell] = val;
                        if (track) {
                            pt[cell] = t;
                            pb[cell] = b;
                        }
                    }
                }
            }
        reachable += fresh;
        std::swap(cur, next);
    }

    core.value = kNegInf;
    for (long s = 0; s <= total; ++s)
        for (long b = 0; b <= bmax; ++b) {
            double v = cur[static_cast<std::size_t>(s) * core.width +
                           static_cast<std::size_t>(b)];
            if (v > core.value) {
                core.value = v;
                core.s = s;
                core.b = b;
            }
        }
    return core;
}

}  // namespace

AllocationTrace fixed_supply_thresholds(std::span<const double> w, std::span<const int> c,
                                        const MarketStructure& market, bool invert_ties) {
    validate_inputs(w, c, market);
    int k = market.k();
    AllocationTrace trace;
    trace.positive.resize(static_cast<std::size_t>(k));
    trace.pools.resize(static_cast<std::size_t>(k));
    trace.survivors.resize(static_cast<std::size_t>(k));
    trace.removals.assign(static_cast<std::size_t>(k), 0);
    trace.level_thresholds.assign(static_cast<std::size_t>(k), 0.0);
    trace.served_free.resize(static_cast<std::size_t>(k));

    for (std::size_t l = 0; l < c.size(); ++l)
        if (w[l] > 0.0)
            trace.positive[static_cast<std::size_t>(c[l] - 1)].push_back(static_cast<int>(l));

    // Sweep the levels, never holding more candidates than the cumulative
    // free supply; the lowest valuations go first (ties: lower index first,
    // or higher index when inverted).
    std::vector<int> carried;
    for (int i = 1; i <= k; ++i) {
        std::vector<int> pool = carried;
        const auto& fresh = trace.positive[static_cast<std::size_t>(i - 1)];
        pool.insert(pool.end(), fresh.begin(), fresh.end());
        std::sort(pool.begin(), pool.end());
        trace.pools[static_cast<std::size_t>(i - 1)] = pool;

        long excess = static_cast<long>(pool.size()) - market.cumulative_supply(i);
        long removals = std::max<long>(0, excess);
        trace.removals[static_cast<std::size_t>(i - 1)] = removals;

        std::vector<int> by_value = pool;
        std::sort(by_value.begin(), by_value.end(), [&](int a, int b) {
            double wa = w[static_cast<std::size_t>(a)];
            double wb = w[static_cast<std::size_t>(b)];
            if (wa != wb) return wa < wb;
            return invert_ties ? a > b : a < b;
        });
        if (removals > 0)
            trace.level_thresholds[static_cast<std::size_t>(i - 1)] =
                w[static_cast<std::size_t>(by_value[static_cast<std::size_t>(removals - 1)])];

        carried.assign(by_value.begin() + removals, by_value.end());
        std::sort(carried.begin(), carried.end());
        trace.survivors[static_cast<std::size_t>(i - 1)] = carried;
    }

    // Served without purchases: strictly above zero and above every level
    // threshold from the own class up. Thresholds are member valuations taken
    // verbatim, so ties compare exactly.
    std::vector<double> floor(static_cast<std::size_t>(k));
    double running = 0.0;
    for (int i = k; i >= 1; --i) {
        running = std::max(running, trace.level_thresholds[static_cast<std::size_t>(i - 1)]);
        floor[static_cast<std::size_t>(i - 1)] = running;
    }
    for (std::size_t l = 0; l < c.size(); ++l)
        if (w[l] > floor[static_cast<std::size_t>(c[l] - 1)] && w[l] > 0.0)
            trace.served_free[static_cast<std::size_t>(c[l] - 1)].push_back(static_cast<int>(l));

    return trace;
}

double joint_optimum_value(std::span<const double> w, std::span<const int> c,
                           const MarketStructure& market,
                           std::span<const long> cumulative_supply) {
    validate_inputs(w, c, market);
    if (!cumulative_supply.empty() &&
        cumulative_supply.size() != static_cast<std::size_t>(market.k()))
        throw ValidationError("allocator: cumulative supply override must have k entries");
    std::vector<ClassGains> gains = collect_gains(w, c, market.k());
    return run_dp(gains, market, cumulative_supply, false).value;
}

JointPlan joint_optimum_plan(std::span<const double> w, std::span<const int> c,
                             const MarketStructure& market) {
    validate_inputs(w, c, market);
    const int k = market.k();
    std::vector<ClassGains> gains = collect_gains(w, c, k);
    DpCore core = run_dp(gains, market, {}, true);

    JointPlan plan;
    plan.value = core.value;
    plan.counts.assign(static_cast<std::size_t>(k), 0);
    long s = core.s;
    long b = core.b;
    for (int i = k; i >= 1; --i) {
        std::size_t cell =
            static_cast<std::size_t>(s) * core.width + static_cast<std::size_t>(b);
        long t = core.parent_t[static_cast<std::size_t>(i - 1)][cell];
        long bprev = core.parent_b[static_cast<std::size_t>(i - 1)][cell];
        if (t < 0 || bprev < 0)
            throw InternalConsistencyError("allocator: broken plan reconstruction");
        plan.counts[static_cast<std::size_t>(i - 1)] = t;
        s -= t;
        b = bprev;
    }
    if (s != 0 || b != 0)
        throw InternalConsistencyError("allocator: plan does not return to the origin");
    return plan;
}

std::vector<long> purchase_rule(AllocationTrace& trace, std::span<const double> w,
                                std::span<const int> c, const MarketStructure& market) {
    validate_inputs(w, c, market);
    int k = market.k();
    if (trace.served_free.size() != static_cast<std::size_t>(k))
        throw ValidationError("allocator: trace does not match the market");

    // Served set straight from the optimizer: per class its top plan.counts
    // valuations.
    std::vector<ClassGains> gains = collect_gains(w, c, k);
    JointPlan plan = joint_optimum_plan(w, c, market);
    trace.served.clear();
    for (int i = 0; i < k; ++i) {
        const auto& members = gains[static_cast<std::size_t>(i)].members;
        long count = plan.counts[static_cast<std::size_t>(i)];
        for (long t = 0; t < count; ++t)
            trace.served.push_back(members[static_cast<std::size_t>(t)]);
    }
    std::sort(trace.served.begin(), trace.served.end());

    // Final class threshold, used by the payment rule: marginal value of one
    // extra good, minimized over the classes the consumer can use. Never
    // exceeds the class price (buying was already an option). Off ties,
    // served == {w strictly above the own class threshold}.
    double base = plan.value;
    std::vector<long> bumped(static_cast<std::size_t>(k));
    trace.class_thresholds.assign(static_cast<std::size_t>(k), 0.0);
    double running = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i <= k; ++i)
            bumped[static_cast<std::size_t>(i - 1)] = market.cumulative_supply(i) + (i >= j ? 1 : 0);
        double marginal = std::max(0.0, joint_optimum_value(w, c, market, bumped) - base);
        running = std::min(running, marginal);
        trace.class_thresholds[static_cast<std::size_t>(j - 1)] = running;
    }

    // Cheapest purchases covering the served counts.
    std::vector<long> cum_served(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
        cum_served[static_cast<std::size_t>(i)] = plan.counts[static_cast<std::size_t>(i)];
        if (i > 0)
            cum_served[static_cast<std::size_t>(i)] += cum_served[static_cast<std::size_t>(i - 1)];
    }
    trace.purchases.assign(static_cast<std::size_t>(k), 0);
    long bprev = 0;
    for (int i = 1; i <= k; ++i) {
        long bi = std::max(bprev, cum_served[static_cast<std::size_t>(i - 1)] -
                                      market.cumulative_supply(i));
        trace.purchases[static_cast<std::size_t>(i - 1)] = bi - bprev;
        bprev = bi;
    }

    trace.served_by_purchase.assign(static_cast<std::size_t>(k), {});
    for (int l : trace.served) {
        int cls = c[static_cast<std::size_t>(l)];
        const auto& free = trace.served_free[static_cast<std::size_t>(cls - 1)];
        if (!std::binary_search(free.begin(), free.end(), l))
            trace.served_by_purchase[static_cast<std::size_t>(cls - 1)].push_back(l);
    }

    return trace.purchases;
}

FinalAllocation final_allocation(const AllocationTrace& trace, std::span<const double> w,
                                 std::span<const int> c, const MarketStructure& market) {
    validate_inputs(w, c, market);
    if (trace.class_thresholds.size() != static_cast<std::size_t>(market.k()) ||
        trace.purchases.size() != static_cast<std::size_t>(market.k()))
        throw ValidationError("allocator: trace is missing the purchase pass");

    FinalAllocation out;
    out.xi.assign(c.size(), 0);
    out.vthr.resize(c.size());
    for (std::size_t l = 0; l < c.size(); ++l)
        out.vthr[l] = trace.class_thresholds[static_cast<std::size_t>(c[l] - 1)];
    for (int l : trace.served) out.xi[static_cast<std::size_t>(l)] = 1;

    std::vector<int> cvec(c.begin(), c.end());
    if (!is_feasible(DecisionPair{out.xi, trace.purchases}, cvec, market))
        throw InternalConsistencyError("allocator: emitted decision pair is infeasible");
    return out;
}

AllocatorResult run_allocator(std::span<const double> w, std::span<const int> c,
                              const MarketStructure& market, bool invert_ties) {
    AllocatorResult result;
    result.trace = fixed_supply_thresholds(w, c, market, invert_ties);
    result.purchases = purchase_rule(result.trace, w, c, market);
    result.final = final_allocation(result.trace, w, c, market);
    double value = 0.0;
    for (std::size_t l = 0; l < c.size(); ++l)
        if (result.final.xi[l]) value += w[l];
    for (int i = 1; i <= market.k(); ++i)
        value -= market.price(i) *
                 static_cast<double>(result.purchases[static_cast<std::size_t>(i - 1)]);
    result.objective = value;
    return result;
}

}  // namespace flexauction
