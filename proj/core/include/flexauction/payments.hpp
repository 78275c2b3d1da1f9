#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "flexauction/valuation.hpp"

namespace flexauction {

// Served consumers pay the lowest valuation that would still have won them a
// good, i.e. the inverse virtual valuation of their class threshold at their
// reported level; everyone else pays nothing. Raises InconsistentTraceError
// if a *served* consumer's threshold exceeds every valuation in its support.
std::vector<double> threshold_payment(std::span<const double> vthr,
                                      std::span<const std::uint8_t> xi,
                                      std::span<const int> c,
                                      const std::vector<const ValuationModel*>& models);

// Independent cross-check for one consumer: rerun the full mechanism along a
// sweep of this consumer's valuation report, locate the jump of its served
// indicator by bisection, and integrate the envelope formula. `serve_at` must
// return the indicator for a hypothetical report s (others held fixed).
// Raises MonotonicityViolationError if the indicator steps downward.
double integral_payment(double theta, int reported_level,
                        const std::function<bool(double)>& serve_at,
                        const ValuationModel& model, int quad_points = 200);

}  // namespace flexauction
