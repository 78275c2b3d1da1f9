#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "flexauction/errors.hpp"
#include "flexauction/market.hpp"

namespace flexauction {

// Conditional valuation law per flexibility level. Levels share a common lower
// support bound; upper bounds may differ per level. All queries outside
// [theta_min(b), theta_max(b)] raise DomainError.
class ValuationModel {
public:
    virtual ~ValuationModel() = default;

    virtual int levels() const = 0;
    virtual double theta_min(int b) const = 0;
    virtual double theta_max(int b) const = 0;
    virtual double prior(int b) const = 0;

    virtual double pdf(double theta, int b) const = 0;
    virtual double cdf(double theta, int b) const = 0;

    // theta - (1 - F(theta|b)) / f(theta|b); SingularDensityError when f = 0.
    virtual double virtual_valuation(double theta, int b) const;

    // Infimum of {theta : w(theta,b) >= y}, clamped to the level support.
    // Bisection by default; families with closed forms override.
    virtual double inverse_virtual(double y, int b) const;

    // Inverse-cdf draw of theta given level b.
    virtual double sample_theta(std::mt19937_64& gen, int b) const;

    virtual std::string family() const = 0;

protected:
    void check_level(int b) const;
    void check_support(double theta, int b) const;
};

// Uniform[0, upper_b] per level. Regular when upper is strictly decreasing:
// hazard 1/(upper_b - theta) then rises in both theta and b.
// Closed forms: w = 2*theta - upper_b, w^{-1}(y) = (y + upper_b) / 2.
class UniformModel final : public ValuationModel {
public:
    UniformModel(std::vector<double> upper, std::vector<double> prior);

    int levels() const override { return static_cast<int>(upper_.size()); }
    double theta_min(int) const override { return 0.0; }
    double theta_max(int b) const override;
    double prior(int b) const override;

    double pdf(double theta, int b) const override;
    double cdf(double theta, int b) const override;
    double virtual_valuation(double theta, int b) const override;
    double inverse_virtual(double y, int b) const override;
    double sample_theta(std::mt19937_64& gen, int b) const override;

    std::string family() const override { return "uniform"; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<double>& prior_weights() const { return prior_; }

private:
    std::vector<double> upper_;
    std::vector<double> prior_;
};

// Exponential with per-level rate, truncated to [0, tmax]. Regular when the
// rates are strictly increasing: hazard rate/(1 - exp(-rate*(tmax-theta))).
// w has no elementary inverse; the bisection default applies.
class TruncatedExponentialModel final : public ValuationModel {
public:
    TruncatedExponentialModel(std::vector<double> rates, double tmax,
                              std::vector<double> prior);

    int levels() const override { return static_cast<int>(rates_.size()); }
    double theta_min(int) const override { return 0.0; }
    double theta_max(int) const override { return tmax_; }
    double prior(int b) const override;

    double pdf(double theta, int b) const override;
    double cdf(double theta, int b) const override;
    double virtual_valuation(double theta, int b) const override;
    double sample_theta(std::mt19937_64& gen, int b) const override;

    std::string family() const override { return "trunc_exp"; }
    const std::vector<double>& rates() const { return rates_; }
    double tmax() const { return tmax_; }
    const std::vector<double>& prior_weights() const { return prior_; }

private:
    std::vector<double> rates_;
    double tmax_;
    std::vector<double> prior_;
};

// Lattice audit of the hazard-rate conditions the mechanism relies on:
//  (a) hazard non-decreasing in theta within each level,
//  (b) hazard strictly increasing in the level at fixed theta (on the shared
//      support; points where both hazards diverge are skipped),
//  (c) negative virtual valuation at the bottom of each level's support.
// (b) is vacuous for single-level models.
struct RegularityReport {
    bool monotone_in_theta = true;
    bool increasing_in_level = true;
    bool negative_at_bottom = true;

    bool pass() const { return monotone_in_theta && increasing_in_level && negative_at_bottom; }

    // First violation found, for diagnostics.
    std::string detail;
};

RegularityReport check_regularity(const ValuationModel& model, int grid_size = 257);

// Draw a level from the prior, then theta given the level. Consumes exactly
// two engine draws so parallel streams stay aligned.
ConsumerType sample_type(const ValuationModel& model, std::mt19937_64& gen);

}  // namespace flexauction
