#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexauction/mechanism.hpp"
#include "flexauction/scenario.hpp"

namespace flexauction {

// Deliberately broken variants for harness sensitivity checks. The suites
// must flag each of them; `none` must pass.
enum class Corruption {
    none,
    halved_payments,   // charges half; over-reporting becomes profitable
    doubled_payments,  // charges double; participation can turn loss-making
    serve_everyone,    // ignores thresholds and capacity but still charges the
                       // honest rule's payments; under-reporting dodges them
};

Corruption corruption_from_string(const std::string& name);

// Monte Carlo average of one consumer's served indicator and payment when it
// reports (r, c) and everyone else reports their sampled type truthfully.
// Trial t draws from a stream seeded by (seed, t) only, so estimates for
// different reports share their draws (common random numbers) and results do
// not depend on the worker count.
struct InterimEstimate {
    double xi_hat = 0.0;
    double t_hat = 0.0;
    double se_xi = 0.0;
    double se_t = 0.0;
    long trials = 0;

    double utility(double theta) const { return theta * xi_hat - t_hat; }
};

InterimEstimate estimate_interim(const Scenario& scenario, std::size_t consumer,
                                 double r, int c, long trials, std::uint64_t seed,
                                 Corruption corruption = Corruption::none);

// Truth-telling check. For every true type on a per-level valuation grid and
// every legal misreport (any valuation on the reported level's grid, any
// level at or below the true one), the paired trial-by-trial utility
// difference must not favor the misreport by more than `slack_sigmas`
// standard errors of the difference.
struct BicViolation {
    std::size_t consumer = 0;
    double true_theta = 0.0;
    int true_level = 1;
    double rep_theta = 0.0;
    int rep_level = 1;
    double gain_mean = 0.0;  // misreport utility minus truthful utility
    double gain_se = 0.0;
};

struct BicReport {
    bool pass = true;
    long pairs_checked = 0;
    double worst_margin = 0.0;  // max over pairs of gain_mean - slack (positive = violation)
    std::vector<BicViolation> violations;
};

struct SuiteOptions {
    int grid_points = 9;
    long trials = 10000;
    long expost_samples = 100000;
    std::uint64_t seed = 1;
    double slack_sigmas = 3.0;
    Corruption corruption = Corruption::none;
    int consumer = -1;  // restrict to one consumer, -1 = all
};

BicReport verify_bic(const Scenario& scenario, const SuiteOptions& opt);

// Participation check: interim utility above -slack on the grid and zero
// (within slack) at the bottom of the support; ex-post utility non-negative
// on sampled truthful profiles, with unserved consumers paying nothing.
struct IrReport {
    bool pass = true;
    double worst_interim = 0.0;       // most negative interim utility beyond slack
    double worst_bottom_gap = 0.0;    // largest |utility at theta_min| beyond slack
    long expost_violations = 0;
    double worst_expost = 0.0;        // most negative ex-post utility observed
    long pairs_checked = 0;
};

IrReport verify_ir(const Scenario& scenario, const SuiteOptions& opt);

// Revenue accounting: the average collected profit and the average served
// virtual surplus estimate the same number; their paired difference must
// cover zero within slack.
struct ProfitReport {
    bool pass = true;
    double profit_mean = 0.0;
    double profit_se = 0.0;
    double surplus_mean = 0.0;
    double surplus_se = 0.0;
    double diff_mean = 0.0;
    double diff_se = 0.0;
    long trials = 0;
};

ProfitReport estimate_profit(const Scenario& scenario, long trials, std::uint64_t seed,
                             Corruption corruption = Corruption::none);

// Interim allocation monotone in the valuation report and in the reported
// level, on estimate grids, within slack.
struct MonotonicityReport {
    bool pass = true;
    double worst_drop = 0.0;  // largest estimated decrease beyond slack
    long pairs_checked = 0;
};

MonotonicityReport verify_interim_monotonicity(const Scenario& scenario,
                                               const SuiteOptions& opt);

// Worker count for trial loops: AUCTION_THREADS when set (clamped to [1,64]),
// else the hardware concurrency. Affects speed only, never results.
int worker_count();

}  // namespace flexauction
