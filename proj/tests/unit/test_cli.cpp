#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "helpers.hpp"

using nlohmann::json;
using testutil::run_cli;
using testutil::scenario_path;

namespace {

const char* kIrregularJson = R"({
  "k": 2, "m": [1, 0], "p": [5, 3],
  "consumers": [
    {"model": {"family": "uniform", "upper": [10, 12], "prior": [0.5, 0.5]},
     "true_type": {"theta": 9, "b": 1}}
  ],
  "seed": 1
})";

}  // namespace

TEST_SUITE_BEGIN("command line");

TEST_CASE("the harness knows where the binary lives") {
    REQUIRE_FALSE(testutil::cli_path().empty());
}

TEST_CASE("run emits the full outcome for the two-band scenario") {
    auto result = run_cli("run " + scenario_path("two_band.json"));
    REQUIRE(result.exit_code == 0);
    json j = json::parse(result.out);
    CHECK(j["n"] == 3);
    CHECK(j["served"] == json::array({1, 1, 1}));
    CHECK(j["purchases"] == json::array({0, 2}));
    CHECK(j["payments"] == json::array({11.5, 6.5, 6.5}));
    CHECK(j["profit"] == 18.5);
    CHECK(j["virtual_valuations"] == json::array({10.0, 6.0, 3.5}));
    CHECK(j["virtual_thresholds"] == json::array({3.0, 3.0, 3.0}));
    CHECK(j["theta_thresholds"] == json::array({11.5, 6.5, 6.5}));
    CHECK(j["witness_complete"] == true);
    REQUIRE(j["witness"].size() == 3);
    CHECK(j["witness"][0]["band"] == 1);
    CHECK(j["witness"][0]["purchased"] == false);
    CHECK(j["witness"][1]["purchased"] == true);
    CHECK_FALSE(j.contains("trace"));
}

TEST_CASE("explain includes the allocation trace") {
    auto result = run_cli("run --explain " + scenario_path("two_band.json"));
    REQUIRE(result.exit_code == 0);
    json j = json::parse(result.out);
    REQUIRE(j.contains("trace"));
    CHECK(j["trace"]["removals"] == json::array({0, 2}));
    CHECK(j["trace"]["level_thresholds"] == json::array({0.0, 6.0}));
    CHECK(j["trace"]["served_without_purchases"] == json::parse("[[0],[]]"));
    CHECK(j["trace"]["served"] == json::array({0, 1, 2}));
    CHECK(j["trace"]["class_thresholds"] == json::array({3.0, 3.0}));
}

TEST_CASE("the outcome can be written to a file instead") {
    auto dir = testutil::temp_dir();
    std::string out_path = (dir / "outcome.json").string();
    auto to_file = run_cli("run " + scenario_path("two_band.json") + " --out " + out_path);
    REQUIRE(to_file.exit_code == 0);
    std::ifstream in(out_path);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto to_stdout = run_cli("run " + scenario_path("two_band.json"));
    CHECK(text == to_stdout.out);
}

TEST_CASE("reported profiles override the true types") {
    auto dir = testutil::temp_dir();
    std::string reports =
        testutil::write_file(dir, "reports.json", R"({"r": [15, 8, 6.75], "c": [1, 2, 1]})");
    auto result =
        run_cli("run " + scenario_path("two_band.json") + " --reports " + reports);
    REQUIRE(result.exit_code == 0);
    json j = json::parse(result.out);
    CHECK(j["served"] == json::array({1, 1, 0}));
    CHECK(j["purchases"] == json::array({0, 1}));
    CHECK(j["payments"] == json::array({11.5, 6.5, 0.0}));
    CHECK(j["profit"] == 15.0);
}

TEST_CASE("claiming more flexibility than the true type is an input error") {
    auto dir = testutil::temp_dir();
    std::string reports =
        testutil::write_file(dir, "reports.json", R"({"r": [15, 8, 6.75], "c": [2, 2, 2]})");
    auto result =
        run_cli("run " + scenario_path("two_band.json") + " --reports " + reports);
    CHECK(result.exit_code == 2);
}

TEST_CASE("input errors exit with code 2") {
    auto dir = testutil::temp_dir();
    CHECK(run_cli("run " + (dir / "missing.json").string()).exit_code == 2);

    std::string bad_json = testutil::write_file(dir, "bad.json", "{ not json");
    CHECK(run_cli("run " + bad_json).exit_code == 2);

    std::string bad_prices = testutil::write_file(dir, "prices.json",
        R"({"k": 2, "m": [1, 0], "p": [3, 5], "consumers": []})");
    CHECK(run_cli("run " + bad_prices).exit_code == 2);

    std::string wrong_len = testutil::write_file(dir, "reports.json", R"({"r": [1], "c": [1]})");
    CHECK(run_cli("run " + scenario_path("two_band.json") + " --reports " + wrong_len)
              .exit_code == 2);

    std::string outside = testutil::write_file(dir, "outside.json",
                                               R"({"r": [25, 8, 6.75], "c": [1, 2, 2]})");
    CHECK(run_cli("run " + scenario_path("two_band.json") + " --reports " + outside)
              .exit_code == 2);
}

TEST_CASE("usage errors exit with code 2 and help with 0") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("verify " + scenario_path("two_band.json") + " --suite bogus").exit_code == 2);
    CHECK(run_cli("verify " + scenario_path("two_band.json") +
                  " --suite bic --inject bogus").exit_code == 2);
    CHECK(run_cli("oracle-compare --max-n 13").exit_code == 2);
}

TEST_CASE("an empty population runs to a zero outcome") {
    auto dir = testutil::temp_dir();
    std::string empty = testutil::write_file(dir, "empty.json",
        R"({"k": 1, "m": [1], "p": [2], "consumers": []})");
    auto result = run_cli("run " + empty);
    REQUIRE(result.exit_code == 0);
    json j = json::parse(result.out);
    CHECK(j["n"] == 0);
    CHECK(j["served"] == json::array());
    CHECK(j["profit"] == 0.0);
}

TEST_CASE("irregular populations are refused at the gate") {
    auto dir = testutil::temp_dir();
    std::string irregular = testutil::write_file(dir, "irregular.json", kIrregularJson);
    CHECK(run_cli("run " + irregular).exit_code == 2);

    auto audit = run_cli("check-regularity " + irregular);
    CHECK(audit.exit_code == 1);
    json j = json::parse(audit.out);
    CHECK(j["pass"] == false);

    auto good = run_cli("check-regularity " + scenario_path("two_band.json"));
    CHECK(good.exit_code == 0);
    json g = json::parse(good.out);
    CHECK(g["pass"] == true);
    CHECK(g["models"].size() == 3);
}

TEST_CASE("oracle comparison succeeds on short random streams") {
    auto joint = run_cli("oracle-compare --instances 150 --seed 9");
    REQUIRE(joint.exit_code == 0);
    json j = json::parse(joint.out);
    CHECK(j["instances"] == 150);
    CHECK(j["max_gap"].get<double>() <= 1e-9);

    auto fixed = run_cli("oracle-compare --instances 150 --seed 9 --fixed-supply");
    REQUIRE(fixed.exit_code == 0);
    CHECK(json::parse(fixed.out)["fixed_supply"] == true);

    auto inverted = run_cli("oracle-compare --instances 100 --seed 9 --invert-ties");
    CHECK(inverted.exit_code == 0);
}

TEST_CASE("verification suites pass honestly and fail under injection") {
    std::string scenario = scenario_path("bic_k2_a.json");
    auto honest = run_cli("verify " + scenario + " --suite bic --trials 250 --grid 3");
    REQUIRE(honest.exit_code == 0);
    json j = json::parse(honest.out);
    CHECK(j["suite"] == "bic");
    CHECK(j["pass"] == true);

    auto halved = run_cli("verify " + scenario +
                          " --suite bic --trials 250 --grid 3 --inject halved-payments");
    CHECK(halved.exit_code == 1);
    CHECK(json::parse(halved.out)["pass"] == false);

    auto doubled = run_cli("verify " + scenario +
                           " --suite ir --trials 250 --grid 3 --expost-samples 500"
                           " --inject doubled-payments");
    CHECK(doubled.exit_code == 1);

    auto narrowed = run_cli("verify " + scenario +
                            " --suite interim --trials 250 --grid 3 --consumer 0");
    CHECK(narrowed.exit_code == 0);
}

TEST_CASE("outputs are byte-identical across worker counts") {
    std::string args = "verify " + scenario_path("bic_k2_b.json") +
                       " --suite bic --trials 300 --grid 3 --seed 77";
    auto one = testutil::run_command("AUCTION_THREADS=1 " + testutil::cli_path() + " " + args);
    auto five = testutil::run_command("AUCTION_THREADS=5 " + testutil::cli_path() + " " + args);
    REQUIRE(one.exit_code == 0);
    REQUIRE(five.exit_code == 0);
    CHECK(one.out == five.out);
    CHECK_FALSE(one.out.empty());
}

TEST_SUITE_END();
