// Command-line front end: run the mechanism on a scenario, arbitrate the
// allocator against the exhaustive search, drive the statistical suites, and
// audit model regularity. Exit codes: 0 pass, 1 verification failure, 2 input
// error. Output is a pure function of (inputs, flags); AUCTION_THREADS only
// changes speed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flexauction/json_io.hpp"
#include "flexauction/mechanism.hpp"
#include "flexauction/oracle.hpp"
#include "flexauction/rng.hpp"
#include "flexauction/simulate.hpp"

namespace {

using namespace flexauction;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
    out << text << "\n";
}

int do_run(const std::string& scenario_path, const std::string& reports_path,
           const std::string& out_path, bool explain) {
    Scenario scenario = Scenario::from_json_file(scenario_path);

    for (std::size_t i = 0; i < scenario.size(); ++i) {
        RegularityReport reg = check_regularity(scenario.model(i));
        if (!reg.pass())
            throw ValidationError("consumer " + std::to_string(i) +
                                  " has an irregular valuation model: " + reg.detail);
    }

    std::vector<ConsumerType> types = scenario.true_types();
    ReportedProfile reports = Scenario::truthful(types);
    if (!reports_path.empty()) {
        reports = reports_from_json_file(reports_path, scenario.size());
        reports.validate(scenario.market().k());
        for (std::size_t i = 0; i < scenario.size(); ++i)
            if (reports.c[i] > types[i].b)
                throw ValidationError("report " + std::to_string(i) +
                                      " claims more flexibility than the true type");
    }

    MechanismOutcome outcome = run_mechanism(scenario, reports);
    emit(outcome_to_json(outcome, explain), out_path);
    return 0;
}

// One random market + virtual-valuation profile per index, sized inside the
// exhaustive-search guard.
struct RandomInstance {
    MarketStructure market;
    std::vector<double> w;
    std::vector<int> c;
};

RandomInstance draw_instance(std::uint64_t seed, long index, int max_n, int max_k) {
    std::mt19937_64 gen = make_engine(seed, static_cast<std::uint64_t>(index));
    int n = 1 + static_cast<int>(uniform01(gen) * max_n);
    n = std::min(n, max_n);
    int k = 1 + static_cast<int>(uniform01(gen) * max_k);
    k = std::min(k, max_k);

    std::vector<long> m(static_cast<std::size_t>(k));
    for (auto& mi : m) mi = static_cast<long>(uniform01(gen) * 3.0);

    std::vector<double> p(static_cast<std::size_t>(k));
    while (true) {
        for (auto& pi : p) pi = 10.0 * (1.0 - uniform01(gen));
        std::sort(p.begin(), p.end(), std::greater<>());
        bool separated = true;
        for (int i = 0; i + 1 < k; ++i)
            if (p[static_cast<std::size_t>(i + 1)] >= p[static_cast<std::size_t>(i)] - 1e-9)
                separated = false;
        if (separated) break;
    }

    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        w[static_cast<std::size_t>(l)] = -5.0 + 20.0 * uniform01(gen);
        c[static_cast<std::size_t>(l)] =
            std::min(k, 1 + static_cast<int>(uniform01(gen) * k));
    }
    return {MarketStructure(k, std::move(m), std::move(p)), std::move(w), std::move(c)};
}

int do_oracle_compare(long instances, std::uint64_t seed, int max_n, int max_k,
                      bool fixed_supply, bool invert_ties) {
    if (instances < 1) throw ValidationError("oracle-compare: need at least one instance");
    if (max_n < 1 || max_n > 12)
        throw SizeGuardError("oracle-compare: max-n must be within the search guard (1..12)");
    if (max_k < 1) throw ValidationError("oracle-compare: max-k must be positive");

    double max_gap = 0.0;
    for (long idx = 0; idx < instances; ++idx) {
        RandomInstance inst = draw_instance(seed, idx, max_n, max_k);
        double mine;
        OracleSolution truth;
        if (fixed_supply) {
            AllocationTrace trace =
                fixed_supply_thresholds(inst.w, inst.c, inst.market, invert_ties);
            mine = 0.0;
            for (const auto& level : trace.served_free)
                for (int l : level) mine += inst.w[static_cast<std::size_t>(l)];
            truth = solve_exact_fixed_supply(inst.w, inst.c, inst.market);
        } else {
            mine = run_allocator(inst.w, inst.c, inst.market, invert_ties).objective;
            truth = solve_exact(inst.w, inst.c, inst.market);
        }
        double gap = std::abs(mine - truth.value);
        max_gap = std::max(max_gap, gap);
        if (gap > 1e-9) {
            nlohmann::ordered_json j;
            j["instance"] = idx;
            j["k"] = inst.market.k();
            j["m"] = inst.market.free_supply();
            j["p"] = inst.market.prices();
            j["w"] = inst.w;
            j["c"] = inst.c;
            j["allocator_value"] = mine;
            j["oracle_value"] = truth.value;
            j["oracle_served"] = truth.best.xi;
            j["oracle_purchases"] = truth.best.g;
            std::cout << j.dump(2) << "\n";
            return 1;
        }
    }
    nlohmann::ordered_json j;
    j["instances"] = instances;
    j["fixed_supply"] = fixed_supply;
    j["max_gap"] = round12(max_gap);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int do_verify(const std::string& scenario_path, const std::string& suite, long trials,
              std::uint64_t seed, bool seed_given, int grid_points, long expost_samples,
              const std::string& inject, int consumer) {
    Scenario scenario = Scenario::from_json_file(scenario_path);
    SuiteOptions opt;
    opt.trials = trials;
    opt.seed = seed_given ? seed : scenario.seed();
    opt.grid_points = grid_points;
    opt.expost_samples = expost_samples;
    opt.corruption = corruption_from_string(inject);
    opt.consumer = consumer;

    bool pass;
    std::string text;
    if (suite == "bic") {
        BicReport report = verify_bic(scenario, opt);
        pass = report.pass;
        text = bic_report_to_json(report);
    } else if (suite == "ir") {
        IrReport report = verify_ir(scenario, opt);
        pass = report.pass;
        text = ir_report_to_json(report);
    } else if (suite == "profit") {
        ProfitReport report = estimate_profit(scenario, opt.trials, opt.seed, opt.corruption);
        pass = report.pass;
        text = profit_report_to_json(report);
    } else if (suite == "interim") {
        MonotonicityReport report = verify_interim_monotonicity(scenario, opt);
        pass = report.pass;
        text = monotonicity_report_to_json(report);
    } else {
        throw ValidationError("verify: unknown suite '" + suite + "'");
    }
    std::cout << text << "\n";
    return pass ? 0 : 1;
}

int do_check_regularity(const std::string& scenario_path, int grid_size) {
    Scenario scenario = Scenario::from_json_file(scenario_path);
    std::vector<RegularityReport> reports;
    bool all = true;
    for (std::size_t i = 0; i < scenario.size(); ++i) {
        reports.push_back(check_regularity(scenario.model(i), grid_size));
        all = all && reports.back().pass();
    }
    std::cout << regularity_report_to_json(reports) << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Profit-maximizing auction for flexible consumers with costly supply"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run the mechanism on a scenario file");
    std::string run_scenario, run_reports, run_out;
    bool run_explain = false;
    run_cmd->add_option("scenario", run_scenario, "Scenario JSON path")->required();
    run_cmd->add_option("--reports", run_reports, "Reported profile JSON path");
    run_cmd->add_option("--out", run_out, "Write the outcome here instead of stdout");
    run_cmd->add_flag("--explain", run_explain, "Include the allocation trace");

    auto* cmp_cmd = app.add_subcommand(
        "oracle-compare", "Randomized equivalence check against exhaustive search");
    long cmp_instances = 10000;
    std::uint64_t cmp_seed = 1;
    int cmp_max_n = 6, cmp_max_k = 3;
    bool cmp_fixed = false, cmp_invert = false;
    cmp_cmd->add_option("--instances", cmp_instances, "Number of random instances");
    cmp_cmd->add_option("--seed", cmp_seed, "Master seed");
    cmp_cmd->add_option("--max-n", cmp_max_n, "Largest population size");
    cmp_cmd->add_option("--max-k", cmp_max_k, "Largest class count");
    cmp_cmd->add_flag("--fixed-supply", cmp_fixed, "Disable purchases on both sides");
    cmp_cmd->add_flag("--invert-ties", cmp_invert,
                      "Flip the tie-break order among equal valuations");

    auto* ver_cmd = app.add_subcommand("verify", "Statistical truthfulness suites");
    std::string ver_scenario, ver_suite, ver_inject = "none";
    long ver_trials = 10000, ver_expost = 100000;
    std::uint64_t ver_seed = 0;
    int ver_grid = 9, ver_consumer = -1;
    ver_cmd->add_option("scenario", ver_scenario, "Scenario JSON path")->required();
    ver_cmd->add_option("--suite", ver_suite, "bic | ir | profit | interim")->required();
    ver_cmd->add_option("--trials", ver_trials, "Monte Carlo trials per estimate");
    auto* seed_opt = ver_cmd->add_option("--seed", ver_seed, "Master seed (default: scenario seed)");
    ver_cmd->add_option("--grid", ver_grid, "Valuation grid points per level");
    ver_cmd->add_option("--expost-samples", ver_expost, "Profiles for the ex-post check");
    ver_cmd->add_option("--inject", ver_inject,
                        "none | halved-payments | doubled-payments | serve-everyone");
    ver_cmd->add_option("--consumer", ver_consumer, "Restrict to one consumer index");

    auto* reg_cmd = app.add_subcommand("check-regularity",
                                       "Audit the hazard-rate conditions of every model");
    std::string reg_scenario;
    int reg_grid = 257;
    reg_cmd->add_option("scenario", reg_scenario, "Scenario JSON path")->required();
    reg_cmd->add_option("--grid-size", reg_grid, "Lattice points per level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(run_scenario, run_reports, run_out, run_explain);
        if (cmp_cmd->parsed())
            return do_oracle_compare(cmp_instances, cmp_seed, cmp_max_n, cmp_max_k,
                                     cmp_fixed, cmp_invert);
        if (ver_cmd->parsed())
            return do_verify(ver_scenario, ver_suite, ver_trials, ver_seed,
                             seed_opt->count() > 0, ver_grid, ver_expost, ver_inject,
                             ver_consumer);
        if (reg_cmd->parsed()) return do_check_regularity(reg_scenario, reg_grid);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
