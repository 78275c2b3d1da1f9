#include "flexauction/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace flexauction {

namespace {

using nlohmann::ordered_json;

ordered_json num_array(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(round12(x));
    return a;
}

ordered_json int_matrix(const std::vector<std::vector<int>>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& row : v) a.push_back(row);
    return a;
}

}  // namespace

double round12(double x) {
    if (!std::isfinite(x)) return x;
    if (x == 0.0) return 0.0;  // merge the two zero signs
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string outcome_to_json(const MechanismOutcome& outcome, bool include_trace) {
    ordered_json j;
    j["n"] = outcome.xi.size();
    ordered_json served = ordered_json::array();
    for (std::uint8_t s : outcome.xi) served.push_back(static_cast<int>(s));
    j["served"] = std::move(served);
    j["purchases"] = outcome.g;
    j["payments"] = num_array(outcome.payments);
    j["profit"] = round12(outcome.profit);
    j["virtual_valuations"] = num_array(outcome.w);
    j["virtual_thresholds"] = num_array(outcome.virtual_thresholds);
    j["theta_thresholds"] = num_array(outcome.theta_thresholds);
    ordered_json witness = ordered_json::array();
    for (const auto& slot : outcome.witness.slots) {
        ordered_json s;
        s["consumer"] = slot.consumer;
        s["band"] = slot.band;
        s["purchased"] = slot.purchased;
        witness.push_back(std::move(s));
    }
    j["witness_complete"] = outcome.witness.complete;
    j["witness"] = std::move(witness);
    if (include_trace) {
        ordered_json t;
        t["positive"] = int_matrix(outcome.trace.positive);
        t["pools"] = int_matrix(outcome.trace.pools);
        t["survivors"] = int_matrix(outcome.trace.survivors);
        t["removals"] = outcome.trace.removals;
        t["level_thresholds"] = num_array(outcome.trace.level_thresholds);
        t["served_without_purchases"] = int_matrix(outcome.trace.served_free);
        t["purchases"] = outcome.trace.purchases;
        t["served_by_purchase"] = int_matrix(outcome.trace.served_by_purchase);
        t["class_thresholds"] = num_array(outcome.trace.class_thresholds);
        t["served"] = outcome.trace.served;
        j["trace"] = std::move(t);
    }
    return j.dump(2);
}

std::string bic_report_to_json(const BicReport& report) {
    ordered_json j;
    j["suite"] = "bic";
    j["pass"] = report.pass;
    j["pairs_checked"] = report.pairs_checked;
    j["worst_margin"] = round12(report.worst_margin);
    ordered_json v = ordered_json::array();
    for (const auto& viol : report.violations) {
        ordered_json e;
        e["consumer"] = viol.consumer;
        e["true_theta"] = round12(viol.true_theta);
        e["true_level"] = viol.true_level;
        e["rep_theta"] = round12(viol.rep_theta);
        e["rep_level"] = viol.rep_level;
        e["gain_mean"] = round12(viol.gain_mean);
        e["gain_se"] = round12(viol.gain_se);
        v.push_back(std::move(e));
    }
    j["violations"] = std::move(v);
    return j.dump(2);
}

std::string ir_report_to_json(const IrReport& report) {
    ordered_json j;
    j["suite"] = "ir";
    j["pass"] = report.pass;
    j["pairs_checked"] = report.pairs_checked;
    j["worst_interim"] = round12(report.worst_interim);
    j["worst_bottom_gap"] = round12(report.worst_bottom_gap);
    j["expost_violations"] = report.expost_violations;
    j["worst_expost"] = round12(report.worst_expost);
    return j.dump(2);
}

std::string profit_report_to_json(const ProfitReport& report) {
    ordered_json j;
    j["suite"] = "profit";
    j["pass"] = report.pass;
    j["trials"] = report.trials;
    j["profit_mean"] = round12(report.profit_mean);
    j["profit_se"] = round12(report.profit_se);
    j["surplus_mean"] = round12(report.surplus_mean);
    j["surplus_se"] = round12(report.surplus_se);
    j["diff_mean"] = round12(report.diff_mean);
    j["diff_se"] = round12(report.diff_se);
    return j.dump(2);
}

std::string monotonicity_report_to_json(const MonotonicityReport& report) {
    ordered_json j;
    j["suite"] = "interim";
    j["pass"] = report.pass;
    j["pairs_checked"] = report.pairs_checked;
    j["worst_drop"] = round12(report.worst_drop);
    return j.dump(2);
}

std::string regularity_report_to_json(const std::vector<RegularityReport>& reports) {
    ordered_json j;
    bool all = true;
    ordered_json models = ordered_json::array();
    for (const auto& r : reports) {
        all = all && r.pass();
        ordered_json e;
        e["monotone_in_theta"] = r.monotone_in_theta;
        e["increasing_in_level"] = r.increasing_in_level;
        e["negative_at_bottom"] = r.negative_at_bottom;
        e["pass"] = r.pass();
        e["detail"] = r.detail;
        models.push_back(std::move(e));
    }
    j["pass"] = all;
    j["models"] = std::move(models);
    return j.dump(2);
}

ReportedProfile reports_from_json_file(const std::string& path, std::size_t expected_n) {
    std::ifstream in(path);
    if (!in) throw ValidationError("reports: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        auto j = ordered_json::parse(buf.str());
        ReportedProfile reports;
        reports.r = j.at("r").get<std::vector<double>>();
        reports.c = j.at("c").get<std::vector<int>>();
        if (reports.r.size() != expected_n || reports.c.size() != expected_n)
            throw ValidationError("reports: expected " + std::to_string(expected_n) +
                                  " entries");
        return reports;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("reports: bad JSON: ") + e.what());
    }
}

}  // namespace flexauction
