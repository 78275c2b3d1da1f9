#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "flexauction/mechanism.hpp"
#include "flexauction/oracle.hpp"
#include "flexauction/rng.hpp"
#include "flexauction/simulate.hpp"

namespace {

using namespace flexauction;

Scenario make_scenario(int n, std::uint64_t seed) {
    MarketStructure market(3, {2, 1, 1}, {6.0, 4.0, 2.0});
    auto model = std::make_shared<UniformModel>(
        std::vector<double>{20.0, 14.0, 10.0},
        std::vector<double>{0.3, 0.3, 0.4});
    std::vector<ScenarioConsumer> consumers(static_cast<std::size_t>(n),
                                            ScenarioConsumer{model, std::nullopt});
    Scenario scenario(market, std::move(consumers), seed);
    std::mt19937_64 gen = make_engine(seed, 0);
    std::vector<ConsumerType> types = sample_profile(scenario, gen);
    std::vector<ScenarioConsumer> fixed;
    fixed.reserve(types.size());
    for (std::size_t i = 0; i < types.size(); ++i)
        fixed.push_back(ScenarioConsumer{model, types[i]});
    return Scenario(market, std::move(fixed), seed);
}

void BM_mechanism(benchmark::State& state) {
    Scenario scenario = make_scenario(static_cast<int>(state.range(0)), 7);
    ReportedProfile reports = Scenario::truthful(scenario.true_types());
    for (auto _ : state) {
        MechanismOutcome out = run_mechanism(scenario, reports);
        benchmark::DoNotOptimize(out.profit);
    }
}
BENCHMARK(BM_mechanism)->Arg(8)->Arg(32)->Arg(128);

void BM_joint_solve(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    MarketStructure market(3, {2, 1, 1}, {6.0, 4.0, 2.0});
    std::mt19937_64 gen = make_engine(11, 0);
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        w[static_cast<std::size_t>(l)] = -5.0 + 25.0 * uniform01(gen);
        c[static_cast<std::size_t>(l)] = 1 + static_cast<int>(uniform01(gen) * 3.0);
    }
    for (auto _ : state) {
        double v = joint_optimum_value(w, c, market);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_joint_solve)->Arg(32)->Arg(128);

void BM_oracle(benchmark::State& state) {
    MarketStructure market(3, {1, 1, 0}, {6.0, 4.0, 2.0});
    std::mt19937_64 gen = make_engine(13, 0);
    std::vector<double> w(6);
    std::vector<int> c(6);
    for (int l = 0; l < 6; ++l) {
        w[static_cast<std::size_t>(l)] = -5.0 + 20.0 * uniform01(gen);
        c[static_cast<std::size_t>(l)] = 1 + static_cast<int>(uniform01(gen) * 3.0);
    }
    for (auto _ : state) {
        OracleSolution sol = solve_exact(w, c, market);
        benchmark::DoNotOptimize(sol.value);
    }
}
BENCHMARK(BM_oracle);

void BM_interim(benchmark::State& state) {
    Scenario scenario = make_scenario(4, 21);
    for (auto _ : state) {
        InterimEstimate est = estimate_interim(scenario, 0, 12.0, 1, 1000, 5);
        benchmark::DoNotOptimize(est.xi_hat);
    }
}
BENCHMARK(BM_interim);

}  // namespace

BENCHMARK_MAIN();
