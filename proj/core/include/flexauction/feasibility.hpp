#pragma once

#include <vector>

#include "flexauction/market.hpp"

namespace flexauction {

// A decision pair is implementable iff, for every i, the consumers of class
// <= i that are served do not outnumber the goods of class <= i on hand
// (free plus purchased). Nested classes make these cumulative counts a
// complete certificate.
bool is_feasible(const DecisionPair& d, const std::vector<int>& c,
                 const MarketStructure& market);

// One good handed to one served consumer.
struct WitnessSlot {
    int consumer = -1;
    int band = 0;        // good class, 1-based
    bool purchased = false;
};

struct WitnessAssignment {
    bool complete = false;          // false iff the pair is infeasible
    std::vector<WitnessSlot> slots; // one entry per served consumer, consumer order
};

// Constructive matching: consumers in (class, index) order each take, among
// classes <= their own, a free good of the lowest class, else a purchased good
// of their exact class, else any remaining purchased good of the lowest class.
// Succeeds exactly when is_feasible holds.
WitnessAssignment witness_assignment(const DecisionPair& d, const std::vector<int>& c,
                                     const MarketStructure& market);

}  // namespace flexauction
