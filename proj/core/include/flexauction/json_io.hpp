#pragma once

#include <string>

#include "flexauction/mechanism.hpp"
#include "flexauction/simulate.hpp"

namespace flexauction {

// Emitted numbers are rounded to 12 significant digits before serialization
// so outputs diff cleanly and do not depend on the worker count or platform.
double round12(double x);

std::string outcome_to_json(const MechanismOutcome& outcome, bool include_trace);
std::string bic_report_to_json(const BicReport& report);
std::string ir_report_to_json(const IrReport& report);
std::string profit_report_to_json(const ProfitReport& report);
std::string monotonicity_report_to_json(const MonotonicityReport& report);
std::string regularity_report_to_json(const std::vector<RegularityReport>& reports);

// Reports file: {"r": [...], "c": [...]}.
ReportedProfile reports_from_json_file(const std::string& path, std::size_t expected_n);

}  // namespace flexauction
