#include <cmath>
#include <vector>

#include "doctest.h"
#include "flexauction/payments.hpp"
#include "flexauction/valuation.hpp"

using namespace flexauction;

TEST_SUITE_BEGIN("threshold payments");

TEST_CASE("served consumers pay the inverse virtual of their class threshold") {
    UniformModel model({20.0, 10.0}, {0.5, 0.5});
    std::vector<const ValuationModel*> models{&model, &model, &model};
    std::vector<double> vthr{3.0, 3.0, 3.0};
    std::vector<int> c{1, 2, 2};

    std::vector<std::uint8_t> all{1, 1, 1};
    CHECK(threshold_payment(vthr, all, c, models) ==
          std::vector<double>{11.5, 6.5, 6.5});

    std::vector<std::uint8_t> middle{0, 1, 0};
    CHECK(threshold_payment(vthr, middle, c, models) ==
          std::vector<double>{0.0, 6.5, 0.0});
}

TEST_CASE("a served consumer whose threshold clears the support is a hard error") {
    UniformModel model({10.0}, {1.0});
    std::vector<const ValuationModel*> models{&model};
    std::vector<int> c{1};
    std::vector<std::uint8_t> served{1};

    std::vector<double> at_top{10.0};
    CHECK(threshold_payment(at_top, served, c, models) == std::vector<double>{10.0});

    std::vector<double> beyond{11.0};
    CHECK_THROWS_AS(threshold_payment(beyond, served, c, models), InconsistentTraceError);

    std::vector<std::uint8_t> unserved{0};
    CHECK(threshold_payment(beyond, unserved, c, models) == std::vector<double>{0.0});
}

TEST_CASE("input lengths must agree") {
    UniformModel model({10.0}, {1.0});
    std::vector<const ValuationModel*> models{&model};
    CHECK_THROWS_AS(threshold_payment(std::vector<double>{1.0, 2.0},
                                      std::vector<std::uint8_t>{1},
                                      std::vector<int>{1}, models),
                    ValidationError);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("envelope integral cross-check");

TEST_CASE("locates a clean jump to within bisection accuracy") {
    UniformModel model({10.0}, {1.0});
    auto serve_above = [](double s) { return s > 7.25; };
    double t = integral_payment(9.0, 1, serve_above, model);
    CHECK(t == doctest::Approx(7.25).epsilon(1e-9));
}

TEST_CASE("degenerate indicators") {
    UniformModel model({10.0}, {1.0});
    auto always = [](double) { return true; };
    auto never = [](double) { return false; };
    CHECK(integral_payment(9.0, 1, always, model) == 0.0);
    CHECK(integral_payment(9.0, 1, never, model) == 0.0);
}

TEST_CASE("a downward step in the indicator is a hard error") {
    UniformModel model({10.0}, {1.0});
    auto drops = [](double s) { return s < 5.0; };
    CHECK_THROWS_AS(integral_payment(9.0, 1, drops, model), MonotonicityViolationError);
}

TEST_CASE("scan parameters are validated") {
    UniformModel model({10.0}, {1.0});
    auto always = [](double) { return true; };
    CHECK_THROWS_AS(integral_payment(9.0, 1, always, model, 1), ValidationError);
    CHECK_THROWS_AS(integral_payment(-1.0, 1, always, model), ValidationError);
}

TEST_SUITE_END();
