#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fairsent/sampling.hpp"
#include "generators.hpp"

namespace {

using namespace fairsent;

Corpus corpus_with_counts(fairsent::SplitMix64& rng,
                          std::array<std::size_t, 4> counts) {
    auto vocab = testgen::small_vocab(10);
    Corpus c;
    std::size_t next_id = 0;
    for (std::size_t s = 0; s < kStratumCount; ++s) {
        for (std::size_t i = 0; i < counts[s]; ++i) {
            Document d = testgen::random_document(rng, vocab);
            d.language = s < 2 ? Language::English : Language::French;
            d.label = (s % 2 == 0) ? Sentiment::Positive : Sentiment::Negative;
            d.id = "mem:" + std::to_string(next_id++);
            c.docs.push_back(std::move(d));
        }
    }
    return c;
}

std::multiset<std::string> ids_of(const Corpus& c) {
    std::multiset<std::string> ids;
    for (const auto& doc : c.docs) ids.insert(doc.id);
    return ids;
}

TEST(Balance, AllEqualCountsGiveAPermutation) {
    fairsent::SplitMix64 rng(31);
    Corpus c = corpus_with_counts(rng, {5, 5, 5, 5});
    auto [balanced, report] = balance(c, 7);
    EXPECT_EQ(report.target, 5u);
    EXPECT_EQ(ids_of(balanced), ids_of(c));
}

TEST(Balance, DownsamplesToMinimumSubgroup) {
    fairsent::SplitMix64 rng(32);
    Corpus c = corpus_with_counts(rng, {100, 90, 80, 70});
    auto [balanced, report] = balance(c, 7);

    EXPECT_EQ(report.target, 70u);
    EXPECT_EQ(balanced.size(), 280u);
    SubgroupCounts counts = subgroup_counts(balanced);
    for (auto n : counts.n) EXPECT_EQ(n, 70u);

    // Every sampled id must belong to the subgroup that claims it.
    std::map<std::string, std::size_t> stratum_of;
    for (const auto& doc : c.docs) stratum_of[doc.id] = stratum_index(doc);
    for (std::size_t s = 0; s < kStratumCount; ++s) {
        EXPECT_EQ(report.sampled_ids[s].size(), 70u);
        std::set<std::string> distinct(report.sampled_ids[s].begin(),
                                       report.sampled_ids[s].end());
        EXPECT_EQ(distinct.size(), 70u);
        for (const auto& id : report.sampled_ids[s])
            EXPECT_EQ(stratum_of.at(id), s);
    }
}

TEST(Balance, EmptySubgroupIsAnError) {
    fairsent::SplitMix64 rng(33);
    Corpus c = corpus_with_counts(rng, {3, 3, 0, 3});
    EXPECT_THROW(balance(c, 1), EmptySubgroupError);
}

TEST(Balance, DeterministicInSeed) {
    fairsent::SplitMix64 rng(34);
    Corpus c = corpus_with_counts(rng, {20, 15, 12, 18});
    auto [a, ra] = balance(c, 99);
    auto [b, rb] = balance(c, 99);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a.docs[i].id, b.docs[i].id);
    EXPECT_EQ(ra.sampled_ids, rb.sampled_ids);
}

TEST(Balance, CountsEqualMinAcrossRandomCorpora) {
    fairsent::SplitMix64 rng(35);
    for (int round = 0; round < 50; ++round) {
        Corpus c = testgen::random_stratified_corpus(rng, 1, 25);
        SubgroupCounts before = subgroup_counts(c);
        auto [balanced, report] = balance(c, rng.next());
        EXPECT_EQ(report.target, before.min());
        SubgroupCounts after = subgroup_counts(balanced);
        for (auto n : after.n) EXPECT_EQ(n, before.min());
    }
}

TEST(StratumTrainSizes, ExactDivision) {
    auto sizes = stratum_train_sizes({10, 10, 10, 10}, 0.8);
    for (auto n : sizes) EXPECT_EQ(n, 8u);
}

TEST(StratumTrainSizes, LargestRemainderTopUp) {
    // Exact parts 0.8/8/8/8: the global target of 25 forces one round-up,
    // and the largest remainder (0.8) wins it.
    auto sizes = stratum_train_sizes({1, 10, 10, 10}, 0.8);
    EXPECT_EQ(sizes, (std::array<std::size_t, 4>{1, 8, 8, 8}));
}

TEST(StratumTrainSizes, TiesGoToTheEarlierStratum) {
    auto sizes = stratum_train_sizes({5, 5, 0, 0}, 0.5);
    EXPECT_EQ(sizes, (std::array<std::size_t, 4>{3, 2, 0, 0}));
}

TEST(Split, ExactPerStratumDivision) {
    fairsent::SplitMix64 rng(36);
    Corpus c = corpus_with_counts(rng, {10, 10, 10, 10});
    auto [train, test] = split(c, {0.8, 5});
    EXPECT_EQ(train.size(), 32u);
    EXPECT_EQ(test.size(), 8u);
    for (auto n : subgroup_counts(train).n) EXPECT_EQ(n, 8u);
    for (auto n : subgroup_counts(test).n) EXPECT_EQ(n, 2u);
}

TEST(Split, DeterministicInSeed) {
    fairsent::SplitMix64 rng(37);
    Corpus c = corpus_with_counts(rng, {13, 9, 11, 17});
    auto [train_a, test_a] = split(c, {0.7, 123});
    auto [train_b, test_b] = split(c, {0.7, 123});
    ASSERT_EQ(train_a.size(), train_b.size());
    for (std::size_t i = 0; i < train_a.size(); ++i)
        EXPECT_EQ(train_a.docs[i].id, train_b.docs[i].id);
    for (std::size_t i = 0; i < test_a.size(); ++i)
        EXPECT_EQ(test_a.docs[i].id, test_b.docs[i].id);
}

TEST(Split, SingleDocumentStratumLandsInTrain) {
    fairsent::SplitMix64 rng(38);
    Corpus c = corpus_with_counts(rng, {1, 10, 10, 10});
    auto [train, test] = split(c, {0.8, 5});
    EXPECT_EQ(subgroup_counts(train).at(Language::English,
                                        Sentiment::Positive), 1u);
    EXPECT_EQ(subgroup_counts(test).at(Language::English,
                                       Sentiment::Positive), 0u);
}

TEST(Split, RejectsBadInputs) {
    fairsent::SplitMix64 rng(39);
    Corpus c = corpus_with_counts(rng, {2, 2, 2, 2});
    EXPECT_THROW(split(Corpus{}, {0.8, 1}), EmptyCorpusError);
    EXPECT_THROW(split(c, {0.0, 1}), ConfigError);
    EXPECT_THROW(split(c, {1.0, 1}), ConfigError);
}

TEST(Split, PartitionAndStratificationProperties) {
    fairsent::SplitMix64 rng(40);
    for (int round = 0; round < 100; ++round) {
        Corpus c = testgen::random_stratified_corpus(rng, 1, 30);
        double fraction = 0.1 + 0.8 * (rng.next() % 1000) / 1000.0;
        auto [train, test] = split(c, {fraction, rng.next()});

        // Exact partition by document id.
        EXPECT_EQ(train.size() + test.size(), c.size());
        std::multiset<std::string> joined = ids_of(train);
        for (const auto& doc : test.docs) joined.insert(doc.id);
        EXPECT_EQ(joined, ids_of(c));

        // Per-stratum train counts within 1 of the exact fraction.
        SubgroupCounts whole = subgroup_counts(c);
        SubgroupCounts got = subgroup_counts(train);
        for (std::size_t s = 0; s < kStratumCount; ++s) {
            double exact = fraction * static_cast<double>(whole.n[s]);
            EXPECT_LE(std::fabs(static_cast<double>(got.n[s]) - exact), 1.0)
                << "stratum " << s << " fraction " << fraction;
        }
    }
}

}
