#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffarank {

// Violated internal precondition: an upstream bug, not bad input data.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Bad input data (unparseable file, broken schema, invalid config values).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* what) {
    if (!cond) throw ContractError(what);
}

// 64-bit FNV-1a, used to derive per-(seed, match, model) tie-break streams.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t hash_mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// xoshiro-free minimal PRNG with a fully specified sequence, so tie-broken
// orderings are byte-identical across compilers and standard libraries.
class Rng64 {
public:
    explicit Rng64(std::uint64_t seed) : state_(hash_mix(seed)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; unbiased and platform-independent.
    std::uint64_t bounded(std::uint64_t n) {
        if (n < 2) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Uniform Fisher-Yates over [first, last) positions of v.
template <typename T>
void shuffle_range(std::vector<T>& v, std::size_t first, std::size_t last, Rng64& rng) {
    for (std::size_t i = last - first; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(v[first + i - 1], v[first + j]);
    }
}

template <typename T>
void shuffle_range(std::vector<T>& v, Rng64& rng) {
    shuffle_range(v, 0, v.size(), rng);
}

}  // namespace ffarank
