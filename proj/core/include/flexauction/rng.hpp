#pragma once

#include <cstdint>
#include <random>

namespace flexauction {

// splitmix64; used to derive independent per-trial seeds from (master, index)
// so results do not depend on how trials are scheduled across workers.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// mt19937_64 output mapped to [0,1) by hand: the standard pins the engine's
// output sequence but not the library distributions, and byte-identical
// results across platforms are part of the contract.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t index) {
    return std::mt19937_64(derive_seed(master, index));
}

}  // namespace flexauction
