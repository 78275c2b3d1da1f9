#include "flexauction/scenario.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace flexauction {

namespace {

using nlohmann::ordered_json;

std::shared_ptr<const ValuationModel> model_from_json(const ordered_json& j, int k) {
    std::string family = j.at("family").get<std::string>();
    std::vector<double> prior = j.at("prior").get<std::vector<double>>();
    std::shared_ptr<const ValuationModel> model;
    if (family == "uniform") {
        model = std::make_shared<UniformModel>(j.at("upper").get<std::vector<double>>(),
                                               std::move(prior));
    } else if (family == "trunc_exp") {
        model = std::make_shared<TruncatedExponentialModel>(
            j.at("rates").get<std::vector<double>>(), j.at("tmax").get<double>(),
            std::move(prior));
    } else {
        throw ValidationError("scenario: unknown model family '" + family + "'");
    }
    if (model->levels() != k)
        throw ValidationError("scenario: model has " + std::to_string(model->levels()) +
                              " levels but the market has " + std::to_string(k));
    return model;
}

ordered_json model_to_json(const ValuationModel& model) {
    ordered_json j;
    j["family"] = model.family();
    if (const auto* u = dynamic_cast<const UniformModel*>(&model)) {
        j["upper"] = u->upper();
        j["prior"] = u->prior_weights();
    } else if (const auto* t = dynamic_cast<const TruncatedExponentialModel*>(&model)) {
        j["rates"] = t->rates();
        j["tmax"] = t->tmax();
        j["prior"] = t->prior_weights();
    } else {
        throw ValidationError("scenario: model family '" + model.family() +
                              "' has no JSON form");
    }
    return j;
}

Scenario scenario_from_json(const ordered_json& j) {
    int k = j.at("k").get<int>();
    MarketStructure market(k, j.at("m").get<std::vector<long>>(),
                           j.at("p").get<std::vector<double>>());

    std::vector<ScenarioConsumer> consumers;
    for (const auto& cj : j.at("consumers")) {
        ScenarioConsumer consumer;
        consumer.model = model_from_json(cj.at("model"), k);
        if (cj.contains("true_type") && !cj.at("true_type").is_null()) {
            ConsumerType type;
            type.theta = cj.at("true_type").at("theta").get<double>();
            type.b = cj.at("true_type").at("b").get<int>();
            if (type.b < 1 || type.b > k)
                throw ValidationError("scenario: true level out of range");
            if (type.theta < consumer.model->theta_min(type.b) ||
                type.theta > consumer.model->theta_max(type.b))
                throw ValidationError("scenario: true valuation outside its level support");
            consumer.true_type = type;
        }
        consumers.push_back(std::move(consumer));
    }

    std::uint64_t seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
    return Scenario(std::move(market), std::move(consumers), seed);
}

}  // namespace

Scenario::Scenario(MarketStructure market, std::vector<ScenarioConsumer> consumers,
                   std::uint64_t seed)
    : market_(std::move(market)), consumers_(std::move(consumers)), seed_(seed) {
    // An empty population is legal: the mechanism then does nothing and earns 0.
    for (std::size_t i = 0; i < consumers_.size(); ++i) {
        if (!consumers_[i].model)
            throw ValidationError("scenario: consumer " + std::to_string(i) +
                                  " has no valuation model");
        if (consumers_[i].model->levels() != market_.k())
            throw ValidationError("scenario: consumer " + std::to_string(i) +
                                  " model does not span the market's classes");
    }
}

Scenario Scenario::from_json_string(const std::string& text) {
    try {
        return scenario_from_json(ordered_json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario: bad JSON: ") + e.what());
    }
}

Scenario Scenario::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

std::string Scenario::to_json_string() const {
    ordered_json j;
    j["k"] = market_.k();
    j["m"] = market_.free_supply();
    j["p"] = market_.prices();
    j["consumers"] = ordered_json::array();
    for (const auto& consumer : consumers_) {
        ordered_json cj;
        cj["model"] = model_to_json(*consumer.model);
        if (consumer.true_type) {
            cj["true_type"] = {{"theta", consumer.true_type->theta},
                               {"b", consumer.true_type->b}};
        } else {
            cj["true_type"] = nullptr;
        }
        j["consumers"].push_back(std::move(cj));
    }
    j["seed"] = seed_;
    return j.dump(2);
}

std::vector<ConsumerType> Scenario::true_types() const {
    std::vector<ConsumerType> types;
    types.reserve(consumers_.size());
    for (std::size_t i = 0; i < consumers_.size(); ++i) {
        if (!consumers_[i].true_type)
            throw ValidationError("scenario: consumer " + std::to_string(i) +
                                  " has no true type on record");
        types.push_back(*consumers_[i].true_type);
    }
    return types;
}

ReportedProfile Scenario::truthful(const std::vector<ConsumerType>& types) {
    ReportedProfile reports;
    reports.r.reserve(types.size());
    reports.c.reserve(types.size());
    for (const auto& type : types) {
        reports.r.push_back(type.theta);
        reports.c.push_back(type.b);
    }
    return reports;
}

std::vector<ConsumerType> sample_profile(const Scenario& scenario, std::mt19937_64& gen,
                                         bool keep_fixed) {
    std::vector<ConsumerType> types;
    types.reserve(scenario.size());
    for (const auto& consumer : scenario.consumers()) {
        ConsumerType drawn = sample_type(*consumer.model, gen);
        if (keep_fixed && consumer.true_type)
            drawn = *consumer.true_type;
        types.push_back(drawn);
    }
    return types;
}

}  // namespace flexauction
