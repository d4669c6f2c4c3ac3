#pragma once

// Subgroup balancing (minimum-subgroup rule) and stratified train/test
// splitting. Both are pure functions of (corpus, seed): every shuffle uses a
// stream derived from the caller's seed and a fixed stream id, so results
// are reproducible across platforms.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairsent/corpus.hpp"
#include "fairsent/errors.hpp"
#include "fairsent/rng.hpp"

namespace fairsent {

struct BalanceReport {
    SubgroupCounts original;
    std::uint64_t target = 0;
    std::array<std::vector<std::string>, kStratumCount> sampled_ids;
    std::uint64_t seed = 0;
    std::string rng = kRngId;
};

inline std::pair<Corpus, BalanceReport> balance(const Corpus& corpus,
                                                std::uint64_t seed) {
    BalanceReport report;
    report.original = subgroup_counts(corpus);
    report.seed = seed;
    for (std::size_t s = 0; s < kStratumCount; ++s)
        if (report.original.n[s] == 0)
            throw EmptySubgroupError(stratum_name(s));
    report.target = report.original.min();

    std::array<std::vector<std::size_t>, kStratumCount> strata;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i)
        strata[stratum_index(corpus.docs[i])].push_back(i);

    std::vector<std::size_t> picked;
    picked.reserve(report.target * kStratumCount);
    for (std::size_t s = 0; s < kStratumCount; ++s) {
        SplitMix64 rng(derive_seed(seed, Stream::BalanceStratum, s));
        shuffle(strata[s], rng);
        strata[s].resize(report.target);
        for (std::size_t i : strata[s]) {
            report.sampled_ids[s].push_back(corpus.docs[i].id);
            picked.push_back(i);
        }
    }

    SplitMix64 global_rng(derive_seed(seed, Stream::BalanceGlobal));
    shuffle(picked, global_rng);

    Corpus balanced;
    balanced.provenance = corpus.provenance;
    balanced.docs.reserve(picked.size());
    for (std::size_t i : picked) balanced.docs.push_back(corpus.docs[i]);
    return {std::move(balanced), std::move(report)};
}

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

// Per-stratum train sizes: floor(f*n_s) each, then largest-remainder rounding
// up to the global target floor(f*n + 1/2). Ties go to the earlier stratum.
inline std::array<std::size_t, kStratumCount> stratum_train_sizes(
    const std::array<std::size_t, kStratumCount>& sizes, double fraction) {
    std::array<std::size_t, kStratumCount> train{};
    std::array<double, kStratumCount> remainder{};
    std::size_t total = 0, base_sum = 0;
    for (std::size_t s = 0; s < kStratumCount; ++s) {
        double exact = fraction * static_cast<double>(sizes[s]);
        train[s] = static_cast<std::size_t>(exact);
        remainder[s] = exact - static_cast<double>(train[s]);
        total += sizes[s];
        base_sum += train[s];
    }
    auto target = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(total) + 0.5));
    for (std::size_t extra = target - base_sum; extra > 0; --extra) {
        std::size_t best = 0;
        for (std::size_t s = 1; s < kStratumCount; ++s)
            if (remainder[s] > remainder[best]) best = s;
        train[best] += 1;
        remainder[best] = -1.0;
    }
    return train;
}

inline std::pair<Corpus, Corpus> split(const Corpus& corpus,
                                       const SplitSpec& spec) {
    if (corpus.empty())
        throw EmptyCorpusError();
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("train_fraction must lie in (0,1)");

    std::array<std::vector<std::size_t>, kStratumCount> strata;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i)
        strata[stratum_index(corpus.docs[i])].push_back(i);

    std::array<std::size_t, kStratumCount> sizes{};
    for (std::size_t s = 0; s < kStratumCount; ++s) sizes[s] = strata[s].size();
    auto train_sizes = stratum_train_sizes(sizes, spec.train_fraction);

    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t s = 0; s < kStratumCount; ++s) {
        SplitMix64 rng(derive_seed(spec.seed, Stream::SplitStratum, s));
        shuffle(strata[s], rng);
        for (std::size_t i = 0; i < strata[s].size(); ++i)
            (i < train_sizes[s] ? train_idx : test_idx).push_back(strata[s][i]);
    }

    Corpus train, test;
    train.provenance = corpus.provenance;
    test.provenance = corpus.provenance;
    train.docs.reserve(train_idx.size());
    test.docs.reserve(test_idx.size());
    for (std::size_t i : train_idx) train.docs.push_back(corpus.docs[i]);
    for (std::size_t i : test_idx) test.docs.push_back(corpus.docs[i]);
    return {std::move(train), std::move(test)};
}

}
