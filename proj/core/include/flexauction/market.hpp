#pragma once

#include <cstdint>
#include <vector>

#include "flexauction/errors.hpp"

namespace flexauction {

// Goods are partitioned into nested classes 1..k: a class-j good suits every
// consumer of class >= j, so low-class goods are universally usable and carry
// the higher unit prices. m[j-1] free goods of class j are on hand; extra
// class-j goods can be bought at p[j-1], with p strictly decreasing.
class MarketStructure {
public:
    MarketStructure(int k, std::vector<long> m, std::vector<double> p);

    int k() const { return k_; }
    long free_supply(int cls) const { return m_[static_cast<std::size_t>(cls - 1)]; }
    double price(int cls) const { return p_[static_cast<std::size_t>(cls - 1)]; }
    const std::vector<long>& free_supply() const { return m_; }
    const std::vector<double>& prices() const { return p_; }

    // Sum of free supply over classes 1..cls.
    long cumulative_supply(int cls) const { return cum_[static_cast<std::size_t>(cls)]; }

private:
    int k_;
    std::vector<long> m_;
    std::vector<double> p_;
    std::vector<long> cum_;  // cum_[i] = m_1 + ... + m_i, cum_[0] = 0
};

// A reported type: valuation theta and flexibility level b in 1..k. Consumers
// of level b accept any good of class <= b.
struct ConsumerType {
    double theta = 0.0;
    int b = 1;
};

// One report per consumer; r[i] is the valuation report, c[i] the level report.
struct ReportedProfile {
    std::vector<double> r;
    std::vector<int> c;

    std::size_t size() const { return r.size(); }
    void validate(int k) const;
};

// Allocation indicator per consumer plus purchased goods per class.
struct DecisionPair {
    std::vector<std::uint8_t> xi;
    std::vector<long> g;
};

}  // namespace flexauction
