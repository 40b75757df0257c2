#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace kwcl::util {

/// FNV-1a over raw bytes. Used for sub-generator derivation and content hashes.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derives the seed of a named sub-generator from the run's master seed.
/// Every random decision in the pipeline draws from a generator obtained
/// this way, so re-running one stage reproduces its stream exactly.
inline std::uint64_t subseed(std::uint64_t master, std::string_view name) {
    return splitmix64(master ^ fnv1a64(name));
}

inline std::uint64_t subseed(std::uint64_t master, std::string_view name, std::string_view qualifier) {
    return splitmix64(subseed(master, name) ^ fnv1a64(qualifier));
}

inline std::uint64_t subseed(std::uint64_t master, std::string_view name, std::string_view qualifier,
                             std::uint64_t index) {
    return splitmix64(subseed(master, name, qualifier) ^ splitmix64(index));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Uniform in [0, 1). Implemented directly on the engine output so the stream
/// does not depend on the standard library's distribution internals.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Box-Muller without state caching; consumes two engine draws per sample.
inline double normal(std::mt19937_64& rng, double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
}

inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

/// Fisher-Yates with the engine's raw output; deterministic for a fixed seed.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

inline std::vector<std::size_t> permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p, rng);
    return p;
}

} // namespace kwcl::util
