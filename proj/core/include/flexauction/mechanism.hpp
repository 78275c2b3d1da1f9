#pragma once

#include <vector>

#include "flexauction/allocator.hpp"
#include "flexauction/feasibility.hpp"
#include "flexauction/payments.hpp"
#include "flexauction/scenario.hpp"

namespace flexauction {

struct MechanismOutcome {
    std::vector<double> w;                // virtual valuations at the reports
    std::vector<std::uint8_t> xi;
    std::vector<long> g;
    std::vector<double> payments;
    std::vector<double> virtual_thresholds;  // per consumer
    std::vector<double> theta_thresholds;    // per consumer, clamped into support
    double profit = 0.0;                     // payments collected minus purchase cost
    WitnessAssignment witness;
    AllocationTrace trace;
};

struct MechanismOptions {
    bool want_trace = true;    // fill the free-supply trace fields and witness
    bool want_payments = true;
};

// The whole pipeline on one reported profile: virtual valuations at the
// reported levels, exact allocation, threshold payments, witness. Validates
// dimensions and report supports (DomainError outside the reported level's
// support, ValidationError elsewhere).
MechanismOutcome run_mechanism(const Scenario& scenario, const ReportedProfile& reports,
                               const MechanismOptions& opt = {});

// Served indicator and payment of a single consumer under a hypothetical
// report, others fixed; the lean path the Monte Carlo harness loops over.
struct ProbeResult {
    bool served = false;
    double payment = 0.0;
};

ProbeResult probe_consumer(const Scenario& scenario, const ReportedProfile& reports,
                           std::size_t consumer);

}  // namespace flexauction
