#include <map>
#include <vector>

#include "doctest.h"
#include "flexauction/feasibility.hpp"
#include "flexauction/rng.hpp"
#include "helpers.hpp"

using namespace flexauction;

namespace {

DecisionPair make_pair(std::vector<std::uint8_t> xi, std::vector<long> g) {
    return DecisionPair{std::move(xi), std::move(g)};
}

}  // namespace

TEST_SUITE_BEGIN("feasibility certificate");

TEST_CASE("cumulative counts decide implementability") {
    MarketStructure market(2, {1, 0}, {5.0, 3.0});
    std::vector<int> c{1, 2, 2};
    CHECK_FALSE(is_feasible(make_pair({1, 1, 1}, {0, 0}), c, market));
    CHECK(is_feasible(make_pair({1, 1, 1}, {0, 2}), c, market));
    CHECK(is_feasible(make_pair({1, 1, 1}, {2, 0}), c, market));
    CHECK_FALSE(is_feasible(make_pair({1, 1, 1}, {0, 1}), c, market));
    CHECK(is_feasible(make_pair({1, 0, 0}, {0, 0}), c, market));
    CHECK(is_feasible(make_pair({0, 0, 0}, {0, 0}), c, market));
}

TEST_CASE("low-class goods are universal, high-class goods are not") {
    // A class-2 good cannot serve the class-1 consumer...
    MarketStructure high_only(2, {0, 1}, {5.0, 3.0});
    CHECK_FALSE(is_feasible(make_pair({1}, {0, 0}), {1}, high_only));
    // ...but a class-1 good serves the class-2 consumer.
    MarketStructure low_only(2, {1, 0}, {5.0, 3.0});
    CHECK(is_feasible(make_pair({1}, {0, 0}), {2}, low_only));
}

TEST_CASE("malformed decision pairs are rejected") {
    MarketStructure market(2, {1, 0}, {5.0, 3.0});
    CHECK_THROWS_AS(is_feasible(make_pair({1, 1}, {0, 0}), {1}, market), ValidationError);
    CHECK_THROWS_AS(is_feasible(make_pair({1}, {0}), {1}, market), ValidationError);
    CHECK_THROWS_AS(is_feasible(make_pair({1}, {0, -1}), {1}, market), ValidationError);
    CHECK_THROWS_AS(is_feasible(make_pair({1}, {0, 0}), {3}, market), ValidationError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("witness assignment");

TEST_CASE("served consumers prefer free goods of the lowest usable class") {
    MarketStructure market(2, {1, 1}, {5.0, 3.0});
    WitnessAssignment witness = witness_assignment(make_pair({1}, {0, 0}), {2}, market);
    REQUIRE(witness.complete);
    REQUIRE(witness.slots.size() == 1);
    CHECK(witness.slots[0].consumer == 0);
    CHECK(witness.slots[0].band == 1);
    CHECK_FALSE(witness.slots[0].purchased);
}

TEST_CASE("purchased goods of the exact class go out before lower ones") {
    MarketStructure market(2, {0, 0}, {5.0, 3.0});
    WitnessAssignment witness =
        witness_assignment(make_pair({1}, {1, 1}), {2}, market);
    REQUIRE(witness.complete);
    CHECK(witness.slots[0].band == 2);
    CHECK(witness.slots[0].purchased);
}

TEST_CASE("an infeasible pair has no witness") {
    MarketStructure market(1, {0}, {5.0});
    WitnessAssignment witness = witness_assignment(make_pair({1}, {0}), {1}, market);
    CHECK_FALSE(witness.complete);
}

TEST_CASE("witness existence coincides with the certificate on random pairs") {
    std::mt19937_64 gen = make_engine(314, 0);
    int complete_seen = 0;
    int infeasible_seen = 0;
    for (int trial = 0; trial < 600; ++trial) {
        testutil::Instance inst = testutil::draw_instance(314, trial, 8, 3);
        int k = inst.market.k();
        std::size_t n = inst.w.size();
        DecisionPair d;
        d.xi.resize(n);
        d.g.resize(static_cast<std::size_t>(k));
        for (auto& x : d.xi) x = uniform01(gen) < 0.5 ? 1 : 0;
        for (auto& gi : d.g) gi = static_cast<long>(uniform01(gen) * 3.0);

        bool feasible = is_feasible(d, inst.c, inst.market);
        WitnessAssignment witness = witness_assignment(d, inst.c, inst.market);
        REQUIRE(witness.complete == feasible);
        if (!feasible) {
            ++infeasible_seen;
            continue;
        }
        ++complete_seen;

        std::size_t served = 0;
        for (auto x : d.xi) served += x;
        REQUIRE(witness.slots.size() == served);

        // Every slot hands a usable good; no band is used past its stock.
        std::map<int, long> free_used;
        std::map<int, long> bought_used;
        for (const WitnessSlot& slot : witness.slots) {
            REQUIRE(slot.consumer >= 0);
            REQUIRE(slot.consumer < static_cast<int>(n));
            REQUIRE(d.xi[static_cast<std::size_t>(slot.consumer)] == 1);
            REQUIRE(slot.band >= 1);
            REQUIRE(slot.band <= inst.c[static_cast<std::size_t>(slot.consumer)]);
            (slot.purchased ? bought_used : free_used)[slot.band] += 1;
        }
        for (int i = 1; i <= k; ++i) {
            REQUIRE(free_used[i] <= inst.market.free_supply(i));
            REQUIRE(bought_used[i] <= d.g[static_cast<std::size_t>(i - 1)]);
        }
    }
    // The random mix must exercise both outcomes or the property says nothing.
    CHECK(complete_seen > 50);
    CHECK(infeasible_seen > 50);
}

TEST_SUITE_END();
