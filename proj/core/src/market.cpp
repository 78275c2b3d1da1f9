#include "flexauction/market.hpp"

#include <string>

namespace flexauction {

MarketStructure::MarketStructure(int k, std::vector<long> m, std::vector<double> p)
    : k_(k), m_(std::move(m)), p_(std::move(p)) {
    if (k_ < 1) throw ValidationError("market: k must be at least 1");
    if (m_.size() != static_cast<std::size_t>(k_) || p_.size() != static_cast<std::size_t>(k_))
        throw ValidationError("market: m and p must have k entries");
    for (long mi : m_)
        if (mi < 0) throw ValidationError("market: free supply must be non-negative");
    for (int i = 0; i < k_; ++i) {
        if (p_[static_cast<std::size_t>(i)] <= 0.0)
            throw ValidationError("market: prices must be positive");
        if (i > 0 && !(p_[static_cast<std::size_t>(i)] < p_[static_cast<std::size_t>(i - 1)]))
            throw ValidationError("market: prices must be strictly decreasing in the class");
    }
    cum_.resize(static_cast<std::size_t>(k_) + 1, 0);
    for (int i = 1; i <= k_; ++i)
        cum_[static_cast<std::size_t>(i)] =
            cum_[static_cast<std::size_t>(i - 1)] + m_[static_cast<std::size_t>(i - 1)];
}

void ReportedProfile::validate(int k) const {
    if (r.size() != c.size())
        throw ValidationError("reports: r and c must have the same length");
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] < 1 || c[i] > k)
            throw ValidationError("reports: level out of range at consumer " + std::to_string(i));
}

}  // namespace flexauction
