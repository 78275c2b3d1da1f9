#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flexauction/market.hpp"
#include "flexauction/valuation.hpp"

namespace flexauction {

struct ScenarioConsumer {
    std::shared_ptr<const ValuationModel> model;
    std::optional<ConsumerType> true_type;
};

// A market plus its population. Loadable from JSON:
//   {"k": 2, "m": [1,0], "p": [5,3],
//    "consumers": [{"model": {"family": "uniform", "upper": [20,10],
//                             "prior": [0.5,0.5]},
//                   "true_type": {"theta": 15, "b": 1}}, ...],
//    "seed": 42}
// Models: "uniform" (per-level "upper") and "trunc_exp" (per-level "rates",
// scalar "tmax"). true_type may be null; sampling fills it in.
class Scenario {
public:
    Scenario(MarketStructure market, std::vector<ScenarioConsumer> consumers,
             std::uint64_t seed);

    static Scenario from_json_string(const std::string& text);
    static Scenario from_json_file(const std::string& path);
    std::string to_json_string() const;

    const MarketStructure& market() const { return market_; }
    const std::vector<ScenarioConsumer>& consumers() const { return consumers_; }
    std::size_t size() const { return consumers_.size(); }
    std::uint64_t seed() const { return seed_; }

    const ValuationModel& model(std::size_t i) const { return *consumers_[i].model; }

    // True types for all consumers; ValidationError if any is missing.
    std::vector<ConsumerType> true_types() const;

    // Truthful reports from the given types.
    static ReportedProfile truthful(const std::vector<ConsumerType>& types);

private:
    MarketStructure market_;
    std::vector<ScenarioConsumer> consumers_;
    std::uint64_t seed_;
};

// One independent draw of every consumer's type. Types with a fixed
// true_type are redrawn too unless `keep_fixed` is set; the engine always
// advances by exactly two draws per consumer.
std::vector<ConsumerType> sample_profile(const Scenario& scenario, std::mt19937_64& gen,
                                         bool keep_fixed = false);

}  // namespace flexauction
