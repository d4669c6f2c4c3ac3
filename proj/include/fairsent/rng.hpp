#pragma once

// Deterministic randomness for sampling, splits and hyperparameter search.
// Everything below is fixed by this file alone (no std::uniform_* machinery,
// whose output differs between standard library implementations), so seeded
// runs reproduce bit-for-bit anywhere.

#include <cstdint>
#include <vector>

namespace fairsent {

// Identifier recorded in reports next to every seed.
inline constexpr const char* kRngId = "splitmix64/fisher-yates/v1";

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Multiply-high mapping; bias is < n/2^64.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Independent streams per (stage, index), e.g. one stream per stratum.
enum class Stream : std::uint64_t {
    BalanceStratum = 1,
    BalanceGlobal = 2,
    SplitStratum = 3,
    Folds = 4,
    SearchTrial = 5,
    FoldFit = 6,
    SvmOrder = 7,
};

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    SplitMix64 a(seed);
    SplitMix64 b(a.next() ^ (static_cast<std::uint64_t>(stream) * 0xBF58476D1CE4E5B9ULL));
    SplitMix64 c(b.next() ^ (index * 0x94D049BB133111EBULL));
    return c.next();
}

template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}
