#include "flexauction/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flexauction/rng.hpp"

namespace flexauction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_prior(const std::vector<double>& prior, std::size_t levels) {
    if (prior.size() != levels)
        throw ValidationError("model: prior must have one weight per level");
    double sum = 0.0;
    for (double q : prior) {
        if (q < 0.0) throw ValidationError("model: prior weights must be non-negative");
        sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("model: prior weights must sum to one");
}

int draw_level(const std::vector<double>& prior, double u) {
    double acc = 0.0;
    int last = 1;
    for (std::size_t b = 0; b < prior.size(); ++b) {
        if (prior[b] <= 0.0) continue;
        acc += prior[b];
        last = static_cast<int>(b) + 1;
        if (u < acc) return last;
    }
    return last;  // u landed in the rounding tail
}

// Hazard f/(1-F); +inf where the survival mass is exhausted.
double hazard(const ValuationModel& m, double theta, int b) {
    double surv = 1.0 - m.cdf(theta, b);
    double f = m.pdf(theta, b);
    if (surv <= 0.0) return kInf;
    return f / surv;
}

}  // namespace

void ValuationModel::check_level(int b) const {
    if (b < 1 || b > levels())
        throw DomainError("model: level " + std::to_string(b) + " out of range");
}

void ValuationModel::check_support(double theta, int b) const {
    check_level(b);
    if (theta < theta_min(b) || theta > theta_max(b))
        throw DomainError("model: theta " + std::to_string(theta) +
                          " outside the level-" + std::to_string(b) + " support");
}

double ValuationModel::virtual_valuation(double theta, int b) const {
    check_support(theta, b);
    double surv = 1.0 - cdf(theta, b);
    if (surv <= 0.0) return theta;  // hazard diverges at the top of the support
    double f = pdf(theta, b);
    if (f <= 0.0)
        throw SingularDensityError("model: zero density inside the support");
    return theta - surv / f;
}

double ValuationModel::inverse_virtual(double y, int b) const {
    check_level(b);
    double lo = theta_min(b);
    double hi = theta_max(b);
    if (virtual_valuation(hi, b) < y) return hi;  // unreachable threshold, clamp
    if (virtual_valuation(lo, b) >= y) return lo;
    // w is non-decreasing under the hazard conditions; left-biased bisection
    // converges to the infimum of the preimage.
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
        if (virtual_valuation(mid, b) >= y)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double ValuationModel::sample_theta(std::mt19937_64& gen, int b) const {
    check_level(b);
    double u = uniform01(gen);
    // Generic inverse-cdf by bisection; families override with closed forms.
    double lo = theta_min(b);
    double hi = theta_max(b);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid, b) >= u)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

ConsumerType sample_type(const ValuationModel& model, std::mt19937_64& gen) {
    std::vector<double> prior(static_cast<std::size_t>(model.levels()));
    for (int b = 1; b <= model.levels(); ++b)
        prior[static_cast<std::size_t>(b - 1)] = model.prior(b);
    int b = draw_level(prior, uniform01(gen));
    double theta = model.sample_theta(gen, b);
    return ConsumerType{theta, b};
}

UniformModel::UniformModel(std::vector<double> upper, std::vector<double> prior)
    : upper_(std::move(upper)), prior_(std::move(prior)) {
    if (upper_.empty()) throw ValidationError("uniform: needs at least one level");
    for (double u : upper_)
        if (!(u > 0.0)) throw ValidationError("uniform: upper bounds must be positive");
    check_prior(prior_, upper_.size());
}

double UniformModel::theta_max(int b) const {
    check_level(b);
    return upper_[static_cast<std::size_t>(b - 1)];
}

double UniformModel::prior(int b) const {
    check_level(b);
    return prior_[static_cast<std::size_t>(b - 1)];
}

double UniformModel::pdf(double theta, int b) const {
    check_support(theta, b);
    return 1.0 / upper_[static_cast<std::size_t>(b - 1)];
}

double UniformModel::cdf(double theta, int b) const {
    check_support(theta, b);
    return theta / upper_[static_cast<std::size_t>(b - 1)];
}

double UniformModel::virtual_valuation(double theta, int b) const {
    check_support(theta, b);
    return 2.0 * theta - upper_[static_cast<std::size_t>(b - 1)];
}

double UniformModel::inverse_virtual(double y, int b) const {
    check_level(b);
    double u = upper_[static_cast<std::size_t>(b - 1)];
    return std::clamp(0.5 * (y + u), 0.0, u);
}

double UniformModel::sample_theta(std::mt19937_64& gen, int b) const {
    check_level(b);
    return uniform01(gen) * upper_[static_cast<std::size_t>(b - 1)];
}

TruncatedExponentialModel::TruncatedExponentialModel(std::vector<double> rates, double tmax,
                                                     std::vector<double> prior)
    : rates_(std::move(rates)), tmax_(tmax), prior_(std::move(prior)) {
    if (rates_.empty()) throw ValidationError("trunc_exp: needs at least one level");
    if (!(tmax_ > 0.0)) throw ValidationError("trunc_exp: tmax must be positive");
    for (double r : rates_)
        if (!(r > 0.0)) throw ValidationError("trunc_exp: rates must be positive");
    check_prior(prior_, rates_.size());
}

double TruncatedExponentialModel::prior(int b) const {
    check_level(b);
    return prior_[static_cast<std::size_t>(b - 1)];
}

double TruncatedExponentialModel::pdf(double theta, int b) const {
    check_support(theta, b);
    double lam = rates_[static_cast<std::size_t>(b - 1)];
    return lam * std::exp(-lam * theta) / (1.0 - std::exp(-lam * tmax_));
}

double TruncatedExponentialModel::cdf(double theta, int b) const {
    check_support(theta, b);
    double lam = rates_[static_cast<std::size_t>(b - 1)];
    return (1.0 - std::exp(-lam * theta)) / (1.0 - std::exp(-lam * tmax_));
}

double TruncatedExponentialModel::virtual_valuation(double theta, int b) const {
    check_support(theta, b);
    double lam = rates_[static_cast<std::size_t>(b - 1)];
    // (1-F)/f = (1 - exp(-lam*(tmax-theta))) / lam, exactly and stably.
    return theta - (-std::expm1(-lam * (tmax_ - theta))) / lam;
}

double TruncatedExponentialModel::sample_theta(std::mt19937_64& gen, int b) const {
    check_level(b);
    double lam = rates_[static_cast<std::size_t>(b - 1)];
    double u = uniform01(gen);
    double mass = -std::expm1(-lam * tmax_);  // 1 - exp(-lam*tmax)
    return std::min(tmax_, -std::log1p(-u * mass) / lam);
}

RegularityReport check_regularity(const ValuationModel& model, int grid_size) {
    if (grid_size < 2) throw ValidationError("regularity: grid must have at least 2 points");
    RegularityReport report;
    int k = model.levels();
    auto grid_point = [&](double lo, double hi, int j) {
        return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid_size - 1);
    };

    // (a) hazard non-decreasing in theta, each level on its own support.
    for (int b = 1; b <= k && report.monotone_in_theta; ++b) {
        double lo = model.theta_min(b);
        double hi = model.theta_max(b);
        double prev = -kInf;
        for (int j = 0; j < grid_size; ++j) {
            double theta = grid_point(lo, hi, j);
            double h = hazard(model, theta, b);
            if (h < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
                report.monotone_in_theta = false;
                report.detail = "hazard decreases in theta at level " + std::to_string(b) +
                                ", theta=" + std::to_string(theta);
                break;
            }
            if (std::isfinite(h)) prev = h;
        }
    }

    // (b) hazard strictly increasing in the level, on the shared support of
    // each adjacent pair; skip points where both hazards diverge.
    for (int b = 1; b + 1 <= k && report.increasing_in_level; ++b) {
        double lo = std::max(model.theta_min(b), model.theta_min(b + 1));
        double hi = std::min(model.theta_max(b), model.theta_max(b + 1));
        if (!(hi > lo)) continue;
        for (int j = 0; j < grid_size; ++j) {
            double theta = grid_point(lo, hi, j);
            double hlow = hazard(model, theta, b);
            double hhigh = hazard(model, theta, b + 1);
            if (hlow == kInf && hhigh == kInf) continue;
            if (!(hhigh > hlow)) {
                report.increasing_in_level = false;
                report.detail = "hazard fails strict increase from level " + std::to_string(b) +
                                " to " + std::to_string(b + 1) + " at theta=" + std::to_string(theta);
                break;
            }
        }
    }

    // (c) virtual valuation negative at the bottom of every level's support.
    for (int b = 1; b <= k && report.negative_at_bottom; ++b) {
        double w0 = model.virtual_valuation(model.theta_min(b), b);
        if (!(w0 < 0.0)) {
            report.negative_at_bottom = false;
            report.detail = "virtual valuation non-negative at the bottom of level " +
                            std::to_string(b);
        }
    }

    return report;
}

}  // namespace flexauction
