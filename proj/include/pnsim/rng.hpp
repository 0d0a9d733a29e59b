#pragma once

#include <cstdint>
#include <random>

namespace pnsim {

// splitmix64 finalizer; used to derive decorrelated seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from a parent seed and a stream tag. Chaining calls
/// gives counter-based stream splitting: every (seed, tag...) tuple maps to
/// an independent stream, so workers never share RNG state.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
    return splitmix64(parent ^ splitmix64(tag));
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag1, std::uint64_t tag2) {
    return derive_seed(derive_seed(parent, tag1), tag2);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

} // namespace pnsim
