#include "flexauction/payments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace flexauction {

std::vector<double> threshold_payment(std::span<const double> vthr,
                                      std::span<const std::uint8_t> xi,
                                      std::span<const int> c,
                                      const std::vector<const ValuationModel*>& models) {
    if (vthr.size() != xi.size() || xi.size() != c.size() || c.size() != models.size())
        throw ValidationError("payments: mismatched input lengths");
    std::vector<double> t(xi.size(), 0.0);
    for (std::size_t l = 0; l < xi.size(); ++l) {
        if (!xi[l]) continue;
        const ValuationModel& model = *models[l];
        int b = c[l];
        double top = model.virtual_valuation(model.theta_max(b), b);
        if (vthr[l] > top)
            throw InconsistentTraceError(
                "payments: consumer " + std::to_string(l) +
                " is served but its threshold exceeds every attainable valuation");
        t[l] = model.inverse_virtual(vthr[l], b);
    }
    return t;
}

double integral_payment(double theta, int reported_level,
                        const std::function<bool(double)>& serve_at,
                        const ValuationModel& model, int quad_points) {
    if (quad_points < 2) throw ValidationError("payments: need at least two scan points");
    double lo = model.theta_min(reported_level);
    if (theta < lo) throw ValidationError("payments: report below the support");

    // The allocation must be a monotone step in the report; scan for a
    // downward step before trusting the bisection.
    bool seen = false;
    for (int i = 0; i < quad_points; ++i) {
        double s = lo + (theta - lo) * static_cast<double>(i) /
                            static_cast<double>(quad_points - 1);
        bool served = serve_at(s);
        if (seen && !served)
            throw MonotonicityViolationError(
                "payments: allocation drops as the report rises");
        seen = seen || served;
    }

    if (!serve_at(theta)) return 0.0;
    if (serve_at(lo)) return lo;

    // One jump from unserved to served; the payment equals its location.
    double hi = theta;
    for (int iter = 0; iter < 200 && std::nextafter(lo, hi) < hi; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (serve_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace flexauction
