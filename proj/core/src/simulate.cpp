#include "flexauction/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "flexauction/rng.hpp"

namespace flexauction {

namespace {

constexpr double kAbsTol = 1e-9;

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& x) {
    MeanSe out;
    const std::size_t n = x.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double v : x) sum += v;
    out.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : x) {
            double d = v - out.mean;
            ss += d * d;
        }
        out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return out;
}

// Work-stealing loop over [0, n); every slot t is computed from t alone, so
// the schedule cannot change any result.
void parallel_for(long n, const std::function<void(long)>& body) {
    long workers = std::min<long>(worker_count(), std::max<long>(1, n));
    if (workers <= 1) {
        for (long t = 0; t < n; ++t) body(t);
        return;
    }
    std::atomic<long> cursor{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long wi = 0; wi < workers; ++wi)
        pool.emplace_back([&] {
            constexpr long chunk = 64;
            while (true) {
                long lo = cursor.fetch_add(chunk);
                if (lo >= n) return;
                long hi = std::min(n, lo + chunk);
                try {
                    for (long t = lo; t < hi; ++t) body(t);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mu);
                    if (!err) err = std::current_exception();
                    cursor.store(n);
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// Per-trial served indicator and payment of one consumer reporting (r, c)
// against freshly sampled truthful rivals. Trial t depends on (seed, t) only.
struct Column {
    std::vector<std::uint8_t> served;
    std::vector<double> pay;
};

Column probe_column(const Scenario& scenario, std::size_t consumer, double r, int c,
                    long trials, std::uint64_t seed, Corruption corruption) {
    Column col;
    col.served.assign(static_cast<std::size_t>(trials), 0);
    col.pay.assign(static_cast<std::size_t>(trials), 0.0);
    parallel_for(trials, [&](long t) {
        std::mt19937_64 gen = make_engine(seed, static_cast<std::uint64_t>(t));
        std::vector<ConsumerType> types = sample_profile(scenario, gen);
        ReportedProfile reports = Scenario::truthful(types);
        reports.r[consumer] = r;
        reports.c[consumer] = c;
        ProbeResult probe = probe_consumer(scenario, reports, consumer);
        bool served = probe.served;
        double pay = probe.served ? probe.payment : 0.0;
        if (corruption == Corruption::halved_payments) pay *= 0.5;
        if (corruption == Corruption::doubled_payments) pay *= 2.0;
        if (corruption == Corruption::serve_everyone) served = true;
        col.served[static_cast<std::size_t>(t)] = served ? 1 : 0;
        col.pay[static_cast<std::size_t>(t)] = pay;
    });
    return col;
}

std::vector<double> level_grid(const ValuationModel& model, int b, int points) {
    double lo = model.theta_min(b);
    double hi = model.theta_max(b);
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            i == points - 1
                ? hi
                : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

std::vector<std::size_t> selected_consumers(const Scenario& scenario, int restrict_to) {
    std::vector<std::size_t> out;
    if (restrict_to >= 0) {
        if (static_cast<std::size_t>(restrict_to) >= scenario.size())
            throw ValidationError("simulate: selected consumer out of range");
        out.push_back(static_cast<std::size_t>(restrict_to));
    } else {
        for (std::size_t l = 0; l < scenario.size(); ++l) out.push_back(l);
    }
    return out;
}

}  // namespace

Corruption corruption_from_string(const std::string& name) {
    if (name == "none") return Corruption::none;
    if (name == "halved-payments") return Corruption::halved_payments;
    if (name == "doubled-payments") return Corruption::doubled_payments;
    if (name == "serve-everyone") return Corruption::serve_everyone;
    throw ValidationError("simulate: unknown corruption '" + name + "'");
}

InterimEstimate estimate_interim(const Scenario& scenario, std::size_t consumer,
                                 double r, int c, long trials, std::uint64_t seed,
                                 Corruption corruption) {
    if (trials < 1) throw ValidationError("simulate: trials must be positive");
    if (consumer >= scenario.size())
        throw ValidationError("simulate: consumer out of range");
    Column col = probe_column(scenario, consumer, r, c, trials, seed, corruption);
    std::vector<double> xi(col.served.begin(), col.served.end());
    MeanSe mx = mean_se(xi);
    MeanSe mt = mean_se(col.pay);
    InterimEstimate est;
    est.xi_hat = mx.mean;
    est.t_hat = mt.mean;
    est.se_xi = mx.se;
    est.se_t = mt.se;
    est.trials = trials;
    return est;
}

BicReport verify_bic(const Scenario& scenario, const SuiteOptions& opt) {
    if (opt.grid_points < 2) throw ValidationError("simulate: need at least two grid points");
    BicReport report;
    report.worst_margin = -std::numeric_limits<double>::infinity();
    const int k = scenario.market().k();
    const std::size_t T = static_cast<std::size_t>(opt.trials);

    for (std::size_t l : selected_consumers(scenario, opt.consumer)) {
        const ValuationModel& model = scenario.model(l);

        // Every (level, grid point) report this consumer could file, probed
        // once on the shared trial stream; BIC pairs are then pure array math.
        std::vector<std::vector<double>> grids(static_cast<std::size_t>(k));
        std::vector<std::vector<Column>> columns(static_cast<std::size_t>(k));
        for (int c = 1; c <= k; ++c) {
            grids[static_cast<std::size_t>(c - 1)] = level_grid(model, c, opt.grid_points);
            for (double r : grids[static_cast<std::size_t>(c - 1)])
                columns[static_cast<std::size_t>(c - 1)].push_back(
                    probe_column(scenario, l, r, c, opt.trials, opt.seed, opt.corruption));
        }

        std::vector<double> diff(T);
        for (int b = 1; b <= k; ++b) {
            if (model.prior(b) <= 0.0) continue;
            const auto& true_grid = grids[static_cast<std::size_t>(b - 1)];
            for (int jt = 0; jt < opt.grid_points; ++jt) {
                double theta = true_grid[static_cast<std::size_t>(jt)];
                const Column& truth = columns[static_cast<std::size_t>(b - 1)]
                                             [static_cast<std::size_t>(jt)];
                for (int c = 1; c <= b; ++c)
                    for (int jr = 0; jr < opt.grid_points; ++jr) {
                        if (c == b && jr == jt) continue;
                        const Column& lie = columns[static_cast<std::size_t>(c - 1)]
                                                   [static_cast<std::size_t>(jr)];
                        for (std::size_t t = 0; t < T; ++t)
                            diff[t] = theta * (static_cast<double>(lie.served[t]) -
                                               static_cast<double>(truth.served[t])) -
                                      (lie.pay[t] - truth.pay[t]);
                        MeanSe d = mean_se(diff);
                        ++report.pairs_checked;
                        double margin = d.mean - opt.slack_sigmas * d.se;
                        report.worst_margin = std::max(report.worst_margin, margin);
                        if (d.mean > opt.slack_sigmas * d.se + kAbsTol) {
                            report.pass = false;
                            if (report.violations.size() < 1000)
                                report.violations.push_back(
                                    {l, theta, b,
                                     grids[static_cast<std::size_t>(c - 1)]
                                          [static_cast<std::size_t>(jr)],
                                     c, d.mean, d.se});
                        }
                    }
            }
        }
    }
    if (report.pairs_checked == 0) report.worst_margin = 0.0;
    return report;
}

IrReport verify_ir(const Scenario& scenario, const SuiteOptions& opt) {
    if (opt.grid_points < 2) throw ValidationError("simulate: need at least two grid points");
    IrReport report;
    const int k = scenario.market().k();
    const std::size_t T = static_cast<std::size_t>(opt.trials);
    std::vector<double> util(T);

    for (std::size_t l : selected_consumers(scenario, opt.consumer)) {
        const ValuationModel& model = scenario.model(l);
        for (int b = 1; b <= k; ++b) {
            if (model.prior(b) <= 0.0) continue;
            std::vector<double> grid = level_grid(model, b, opt.grid_points);
            for (int j = 0; j < opt.grid_points; ++j) {
                double theta = grid[static_cast<std::size_t>(j)];
                Column col =
                    probe_column(scenario, l, theta, b, opt.trials, opt.seed, opt.corruption);
                for (std::size_t t = 0; t < T; ++t)
                    util[t] = theta * static_cast<double>(col.served[t]) - col.pay[t];
                MeanSe u = mean_se(util);
                ++report.pairs_checked;
                double floor = u.mean + opt.slack_sigmas * u.se;
                if (floor < -kAbsTol) {
                    report.pass = false;
                    report.worst_interim = std::min(report.worst_interim, floor);
                }
                if (j == 0) {
                    double gap = std::abs(u.mean) - opt.slack_sigmas * u.se;
                    if (gap > kAbsTol) {
                        report.pass = false;
                        report.worst_bottom_gap = std::max(report.worst_bottom_gap, gap);
                    }
                }
            }
        }
    }

    // Ex-post: full runs on truthful profiles; nobody may end up below zero
    // and the unserved must pay nothing.
    const long samples = opt.expost_samples;
    std::vector<std::uint8_t> bad(static_cast<std::size_t>(samples), 0);
    std::vector<double> low(static_cast<std::size_t>(samples), 0.0);
    std::uint64_t expost_master = derive_seed(opt.seed, 0x4952ULL);
    MechanismOptions mopt;
    mopt.want_trace = false;
    parallel_for(samples, [&](long t) {
        std::mt19937_64 gen = make_engine(expost_master, static_cast<std::uint64_t>(t));
        std::vector<ConsumerType> types = sample_profile(scenario, gen);
        ReportedProfile reports = Scenario::truthful(types);
        MechanismOutcome out = run_mechanism(scenario, reports, mopt);
        double lowest = 0.0;
        bool violated = false;
        for (std::size_t l = 0; l < scenario.size(); ++l) {
            double pay = out.payments[l];
            bool served = out.xi[l] != 0;
            if (opt.corruption == Corruption::halved_payments) pay *= 0.5;
            if (opt.corruption == Corruption::doubled_payments) pay *= 2.0;
            if (opt.corruption == Corruption::serve_everyone) served = true;
            double u = types[l].theta * (served ? 1.0 : 0.0) - pay;
            if (u < -kAbsTol) violated = true;
            if (!served && pay != 0.0) violated = true;
            lowest = std::min(lowest, u);
        }
        bad[static_cast<std::size_t>(t)] = violated ? 1 : 0;
        low[static_cast<std::size_t>(t)] = lowest;
    });
    for (long t = 0; t < samples; ++t) {
        report.expost_violations += bad[static_cast<std::size_t>(t)];
        report.worst_expost = std::min(report.worst_expost, low[static_cast<std::size_t>(t)]);
    }
    if (report.expost_violations > 0) report.pass = false;
    return report;
}

ProfitReport estimate_profit(const Scenario& scenario, long trials, std::uint64_t seed,
                             Corruption corruption) {
    if (trials < 1) throw ValidationError("simulate: trials must be positive");
    ProfitReport report;
    report.trials = trials;
    std::vector<double> profit(static_cast<std::size_t>(trials));
    std::vector<double> surplus(static_cast<std::size_t>(trials));
    MechanismOptions mopt;
    mopt.want_trace = false;
    parallel_for(trials, [&](long t) {
        std::mt19937_64 gen = make_engine(seed, static_cast<std::uint64_t>(t));
        std::vector<ConsumerType> types = sample_profile(scenario, gen);
        ReportedProfile reports = Scenario::truthful(types);
        MechanismOutcome out = run_mechanism(scenario, reports, mopt);
        double cost = 0.0;
        for (int i = 1; i <= scenario.market().k(); ++i)
            cost += scenario.market().price(i) *
                    static_cast<double>(out.g[static_cast<std::size_t>(i - 1)]);
        double collected = 0.0;
        double virt = 0.0;
        for (std::size_t l = 0; l < scenario.size(); ++l) {
            double pay = out.payments[l];
            bool served = out.xi[l] != 0;
            if (corruption == Corruption::halved_payments) pay *= 0.5;
            if (corruption == Corruption::doubled_payments) pay *= 2.0;
            if (corruption == Corruption::serve_everyone) served = true;
            collected += pay;
            if (served) virt += out.w[l];
        }
        profit[static_cast<std::size_t>(t)] = collected - cost;
        surplus[static_cast<std::size_t>(t)] = virt - cost;
    });
    MeanSe mp = mean_se(profit);
    MeanSe ms = mean_se(surplus);
    std::vector<double> diff(static_cast<std::size_t>(trials));
    for (long t = 0; t < trials; ++t)
        diff[static_cast<std::size_t>(t)] =
            profit[static_cast<std::size_t>(t)] - surplus[static_cast<std::size_t>(t)];
    MeanSe md = mean_se(diff);
    report.profit_mean = mp.mean;
    report.profit_se = mp.se;
    report.surplus_mean = ms.mean;
    report.surplus_se = ms.se;
    report.diff_mean = md.mean;
    report.diff_se = md.se;
    report.pass = std::abs(md.mean) <= 3.0 * md.se + kAbsTol;
    return report;
}

MonotonicityReport verify_interim_monotonicity(const Scenario& scenario,
                                               const SuiteOptions& opt) {
    if (opt.grid_points < 2) throw ValidationError("simulate: need at least two grid points");
    MonotonicityReport report;
    const int k = scenario.market().k();
    const std::size_t T = static_cast<std::size_t>(opt.trials);
    std::vector<double> diff(T);

    auto check_pair = [&](const Column& lo, const Column& hi) {
        for (std::size_t t = 0; t < T; ++t)
            diff[t] = static_cast<double>(hi.served[t]) - static_cast<double>(lo.served[t]);
        MeanSe d = mean_se(diff);
        ++report.pairs_checked;
        double drop = -d.mean - opt.slack_sigmas * d.se;
        if (drop > kAbsTol) {
            report.pass = false;
            report.worst_drop = std::max(report.worst_drop, drop);
        }
    };

    for (std::size_t l : selected_consumers(scenario, opt.consumer)) {
        const ValuationModel& model = scenario.model(l);

        // Serving probability must rise with the valuation report...
        for (int c = 1; c <= k; ++c) {
            std::vector<double> grid = level_grid(model, c, opt.grid_points);
            std::vector<Column> cols;
            for (double r : grid)
                cols.push_back(
                    probe_column(scenario, l, r, c, opt.trials, opt.seed, opt.corruption));
            for (int j = 0; j + 1 < opt.grid_points; ++j)
                check_pair(cols[static_cast<std::size_t>(j)],
                           cols[static_cast<std::size_t>(j + 1)]);
        }

        // ... and with the reported level, on the levels' shared support.
        for (int c = 1; c < k; ++c) {
            double lo = std::max(model.theta_min(c), model.theta_min(c + 1));
            double hi = std::min(model.theta_max(c), model.theta_max(c + 1));
            if (hi <= lo) continue;
            for (int j = 0; j < opt.grid_points; ++j) {
                double r = j == opt.grid_points - 1
                               ? hi
                               : lo + (hi - lo) * static_cast<double>(j) /
                                          static_cast<double>(opt.grid_points - 1);
                Column low = probe_column(scenario, l, r, c, opt.trials, opt.seed,
                                          opt.corruption);
                Column high = probe_column(scenario, l, r, c + 1, opt.trials, opt.seed,
                                           opt.corruption);
                check_pair(low, high);
            }
        }
    }
    return report;
}

int worker_count() {
    if (const char* env = std::getenv("AUCTION_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0')
            return static_cast<int>(std::clamp<long>(v, 1, 64));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min<unsigned>(hw, 64));
}

}  // namespace flexauction
