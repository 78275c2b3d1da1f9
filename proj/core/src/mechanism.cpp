#include "flexauction/mechanism.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace flexauction {

namespace {

// Virtual valuations at the reported types; DomainError if a valuation report
// falls outside its reported level's support.
std::vector<double> virtuals_at_reports(const Scenario& scenario,
                                        const ReportedProfile& reports) {
    if (reports.size() != scenario.size())
        throw ValidationError("mechanism: reports do not match the population");
    reports.validate(scenario.market().k());
    std::vector<double> w(reports.size());
    for (std::size_t l = 0; l < reports.size(); ++l) {
        const ValuationModel& model = scenario.model(l);
        int b = reports.c[l];
        double r = reports.r[l];
        if (r < model.theta_min(b) || r > model.theta_max(b))
            throw DomainError("mechanism: report " + std::to_string(l) +
                              " is outside its level's support");
        w[l] = model.virtual_valuation(r, b);
    }
    return w;
}

// Final class thresholds: marginal value of one extra good of each class,
// minimized over the classes at or below.
std::vector<double> class_thresholds_of(std::span<const double> w, std::span<const int> c,
                                        const MarketStructure& market) {
    int k = market.k();
    double base = joint_optimum_value(w, c, market);
    std::vector<long> bumped(static_cast<std::size_t>(k));
    std::vector<double> thresholds(static_cast<std::size_t>(k));
    double running = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= k; ++j) {
        for (int i = 1; i <= k; ++i)
            bumped[static_cast<std::size_t>(i - 1)] =
                market.cumulative_supply(i) + (i >= j ? 1 : 0);
        double marginal = std::max(0.0, joint_optimum_value(w, c, market, bumped) - base);
        running = std::min(running, marginal);
        thresholds[static_cast<std::size_t>(j - 1)] = running;
    }
    return thresholds;
}

}  // namespace

MechanismOutcome run_mechanism(const Scenario& scenario, const ReportedProfile& reports,
                               const MechanismOptions& opt) {
    MechanismOutcome out;
    out.w = virtuals_at_reports(scenario, reports);
    const MarketStructure& market = scenario.market();

    AllocatorResult alloc = run_allocator(out.w, reports.c, market);
    out.xi = alloc.final.xi;
    out.g = alloc.purchases;
    out.virtual_thresholds = alloc.final.vthr;
    if (opt.want_trace) {
        out.trace = std::move(alloc.trace);
        std::vector<int> cvec(reports.c.begin(), reports.c.end());
        out.witness = witness_assignment(DecisionPair{out.xi, out.g}, cvec, market);
        if (!out.witness.complete)
            throw InternalConsistencyError("mechanism: no witness for a feasible decision");
    }

    out.theta_thresholds.resize(scenario.size());
    std::vector<const ValuationModel*> models(scenario.size());
    for (std::size_t l = 0; l < scenario.size(); ++l) {
        models[l] = &scenario.model(l);
        out.theta_thresholds[l] =
            models[l]->inverse_virtual(out.virtual_thresholds[l], reports.c[l]);
    }

    if (opt.want_payments) {
        out.payments = threshold_payment(out.virtual_thresholds, out.xi, reports.c, models);
        out.profit = 0.0;
        for (double t : out.payments) out.profit += t;
        for (int i = 1; i <= market.k(); ++i)
            out.profit -= market.price(i) *
                          static_cast<double>(out.g[static_cast<std::size_t>(i - 1)]);
    } else {
        out.payments.assign(scenario.size(), 0.0);
        out.profit = 0.0;
    }
    return out;
}

ProbeResult probe_consumer(const Scenario& scenario, const ReportedProfile& reports,
                           std::size_t consumer) {
    if (consumer >= scenario.size())
        throw ValidationError("mechanism: probed consumer out of range");
    std::vector<double> w = virtuals_at_reports(scenario, reports);
    const MarketStructure& market = scenario.market();

    ProbeResult result;
    int b = reports.c[consumer];
    double mine = w[consumer];
    if (mine <= 0.0) return result;

    // Rank within the own class under the plan's ordering (higher valuation
    // first, lower index first on ties) decides membership exactly.
    JointPlan plan = joint_optimum_plan(w, reports.c, market);
    long rank = 0;
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (l == consumer || reports.c[l] != b || w[l] <= 0.0) continue;
        if (w[l] > mine || (w[l] == mine && l < consumer)) ++rank;
    }
    result.served = rank < plan.counts[static_cast<std::size_t>(b - 1)];
    if (result.served) {
        std::vector<double> thresholds = class_thresholds_of(w, reports.c, market);
        result.payment = scenario.model(consumer).inverse_virtual(
            thresholds[static_cast<std::size_t>(b - 1)], b);
    }
    return result;
}

}  // namespace flexauction
