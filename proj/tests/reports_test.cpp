#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fairsent/reports.hpp"
#include "generators.hpp"

namespace {

using namespace fairsent;

RunMeta books_meta() {
    RunMeta meta;
    meta.domain = "books";
    meta.seed = 42;
    meta.eor_variant = EorVariant::MinComponent;
    meta.model = "svm";
    return meta;
}

TEST(NumberText, ShortestFormRoundTripsExactly) {
    fairsent::SplitMix64 rng(81);
    for (int i = 0; i < 200; ++i) {
        double v = (rng.next_double() - 0.5) * std::pow(10.0, i % 13);
        std::string s = detail::format_double(v);
        EXPECT_EQ(detail::parse_double(s), v) << s;
    }
    EXPECT_EQ(detail::format_double(1.0), "1");
    EXPECT_EQ(detail::format_double(0.001), "0.001");
    EXPECT_EQ(detail::format_double(1000.0), "1000");
    EXPECT_EQ(detail::format_double(-1.0), "-1");
}

TEST(NumberText, FixedFormForTables) {
    EXPECT_EQ(detail::format_fixed(16.0 / 27.0), "0.5926");
    EXPECT_EQ(detail::format_fixed(2.0 / 3.0), "0.6667");
    EXPECT_EQ(detail::format_fixed(1.0), "1.0000");
    EXPECT_EQ(detail::format_fixed(0.5, 2), "0.50");
    EXPECT_THROW(detail::parse_double("nan.or.junk"), Error);
    EXPECT_THROW(detail::parse_u64("12x"), Error);
}

TEST(ParseKv, CommentsQuotesAndDuplicates) {
    std::string content =
        "# leading comment\n"
        "a = 1\n"
        "b = \"quoted value\"\n"
        "a = 2\r\n"
        "\n"
        "  c =   spaced\t\n";
    KvMap kv = parse_kv(content, "test.kv");
    ASSERT_EQ(kv.entries.size(), 4u);
    EXPECT_EQ(kv.entries[0].first, "a");
    EXPECT_EQ(kv.entries[0].second, "1");
    EXPECT_EQ(kv.get_or("a", ""), "2");  // last wins
    EXPECT_EQ(kv.get_or("b", ""), "quoted value");
    EXPECT_EQ(kv.get_or("c", ""), "spaced");
    EXPECT_TRUE(kv.has("b"));
    EXPECT_FALSE(kv.has("missing"));
    EXPECT_FALSE(kv.get("missing").has_value());
    EXPECT_EQ(kv.get_or("missing", "fallback"), "fallback");
}

TEST(ParseKv, TypedAccessors) {
    KvMap kv = parse_kv("x = 2.5\nn = 42\nflag = true\noff = false\nbad = yes\n",
                        "test.kv");
    EXPECT_DOUBLE_EQ(kv.get_double("x", 0.0), 2.5);
    EXPECT_DOUBLE_EQ(kv.get_double("missing", 1.5), 1.5);
    EXPECT_EQ(kv.get_u64("n", 0), 42u);
    EXPECT_EQ(kv.get_u64("missing", 7), 7u);
    EXPECT_TRUE(kv.get_bool("flag", false));
    EXPECT_FALSE(kv.get_bool("off", true));
    EXPECT_TRUE(kv.get_bool("missing", true));
    EXPECT_THROW(kv.get_bool("bad", false), ConfigError);
}

TEST(ParseKv, ErrorsNameSourceAndLine) {
    try {
        parse_kv("# fine\n\nno equals sign", "cfg.kv");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg.kv:3"), std::string::npos);
    }
    try {
        parse_kv("= headless", "cfg.kv");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg.kv:1"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("empty key"), std::string::npos);
    }
}

TEST(SplitList, TrimsAndDropsEmpties) {
    EXPECT_EQ(split_list("a, b ,c"),
              (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(split_list(" , a,, "), (std::vector<std::string>{"a"}));
    EXPECT_TRUE(split_list("").empty());
}

TEST(KvWriterOutput, InsertionOrderAndEscapes) {
    KvWriter kv;
    kv.comment("header");
    kv.add("z", "last wins order not sorting");
    kv.add("a", 2.5);
    kv.add("n", std::size_t{7});
    kv.add("flag", true);
    kv.blank();
    EXPECT_EQ(kv.str(),
              "# header\n"
              "z = last wins order not sorting\n"
              "a = 2.5\n"
              "n = 7\n"
              "flag = true\n"
              "\n");
}

TEST(PerformanceKv, RoundTripsThroughParsing) {
    fairsent::SplitMix64 rng(82);
    LabeledPredictions p = testgen::random_predictions(rng);
    SlicedReports reports = sliced_report(p);

    std::string text = performance_kv(reports, books_meta());
    KvMap kv = parse_kv(text, "perf.kv");
    SlicedReports back = performance_from_kv(kv);

    const PerformanceReport* lhs[3] = {&reports.overall, &reports.english,
                                       &reports.french};
    const PerformanceReport* rhs[3] = {&back.overall, &back.english,
                                       &back.french};
    for (int s = 0; s < 3; ++s) {
        EXPECT_EQ(lhs[s]->n, rhs[s]->n);
        EXPECT_EQ(lhs[s]->tp, rhs[s]->tp);
        EXPECT_EQ(lhs[s]->fp, rhs[s]->fp);
        EXPECT_EQ(lhs[s]->tn, rhs[s]->tn);
        EXPECT_EQ(lhs[s]->fn, rhs[s]->fn);
        EXPECT_DOUBLE_EQ(lhs[s]->accuracy, rhs[s]->accuracy);
        EXPECT_DOUBLE_EQ(lhs[s]->positive.f1, rhs[s]->positive.f1);
        EXPECT_DOUBLE_EQ(lhs[s]->negative.precision, rhs[s]->negative.precision);
        EXPECT_DOUBLE_EQ(lhs[s]->macro_f1, rhs[s]->macro_f1);
        EXPECT_DOUBLE_EQ(lhs[s]->weighted_f1, rhs[s]->weighted_f1);
    }
}

TEST(PerformanceKv, CarriesMetadataAndDeviations) {
    SlicedReports reports;
    reports.overall = performance_from_counts(2, 1, 3, 1);
    reports.english = performance_from_counts(1, 0, 2, 1);
    reports.french = performance_from_counts(1, 1, 1, 0);

    KvMap kv = parse_kv(performance_kv(reports, books_meta()), "perf.kv");
    EXPECT_EQ(kv.get_or("meta.toolkit_version", ""), kVersion);
    EXPECT_EQ(kv.get_or("meta.rng", ""), kRngId);
    EXPECT_EQ(kv.get_or("meta.tfidf_log_base", ""), "e");
    EXPECT_EQ(kv.get_u64("meta.seed", 0), 42u);
    EXPECT_EQ(kv.get_or("meta.eor_variant", ""), "min-component");
    EXPECT_EQ(kv.get_or("meta.domain", ""), "books");
    EXPECT_EQ(kv.get_or("meta.model", ""), "svm");
    for (const char* key : {"tokenization", "tfidf", "svm", "search"}) {
        auto v = kv.get("deviations." + std::string(key));
        ASSERT_TRUE(v.has_value()) << key;
        EXPECT_FALSE(v->empty());
    }

    RunMeta meta = meta_from_kv(kv);
    EXPECT_EQ(meta.domain, "books");
    EXPECT_EQ(meta.seed, 42u);
    EXPECT_EQ(meta.model, "svm");
    EXPECT_EQ(meta.eor_variant, EorVariant::MinComponent);
}

TEST(FairnessKv, RoundTripsDefinedRates) {
    GroupRates rates;
    rates.at(Language::English) = group_stats_from_counts(9, 1, 9, 1);
    rates.at(Language::French) = group_stats_from_counts(8, 3, 17, 2);
    FairnessReport report =
        fairness_from_rates(rates, EorVariant::MinComponent);

    KvMap kv = parse_kv(fairness_kv(report, books_meta()), "fair.kv");
    EXPECT_TRUE(kv.get_bool("fairness.eod.defined", false));
    EXPECT_TRUE(kv.get_bool("fairness.eor.defined", false));
    EXPECT_EQ(kv.get_or("fairness.eor_variant", ""), "min-component");
    EXPECT_EQ(kv.get_u64("group.en.tp", 0), 9u);
    EXPECT_EQ(kv.get_u64("group.fr.tn", 0), 17u);

    FairnessReport back = fairness_from_kv(kv);
    EXPECT_DOUBLE_EQ(back.dpd, report.dpd);
    EXPECT_DOUBLE_EQ(back.dpr, report.dpr);
    ASSERT_TRUE(back.eod && back.eor);
    EXPECT_DOUBLE_EQ(*back.eod, *report.eod);
    EXPECT_DOUBLE_EQ(*back.eor, *report.eor);
    EXPECT_EQ(back.eor_variant, EorVariant::MinComponent);
}

TEST(FairnessKv, RoundTripsUndefinedRates) {
    GroupRates rates;
    rates.at(Language::English) = group_stats_from_counts(0, 1, 3, 0);
    rates.at(Language::French) = group_stats_from_counts(2, 1, 2, 0);
    FairnessReport report = fairness_from_rates(rates, EorVariant::Product);
    ASSERT_FALSE(report.eod.has_value());

    KvMap kv = parse_kv(fairness_kv(report, books_meta()), "fair.kv");
    EXPECT_FALSE(kv.get_bool("fairness.eod.defined", true));
    EXPECT_FALSE(kv.has("fairness.eod"));
    EXPECT_FALSE(kv.get_bool("group.en.tpr.defined", true));
    EXPECT_TRUE(kv.get_bool("group.en.fpr.defined", false));

    FairnessReport back = fairness_from_kv(kv);
    EXPECT_FALSE(back.eod.has_value());
    EXPECT_FALSE(back.eor.has_value());
    EXPECT_DOUBLE_EQ(back.dpd, report.dpd);
}

TEST(BalanceKv, RecordsOriginalTargetAndRng) {
    fairsent::SplitMix64 rng(83);
    Corpus corpus = testgen::random_stratified_corpus(rng, 5, 9);
    SubgroupCounts before = subgroup_counts(corpus);
    auto [sampled, report] = balance(corpus, 17);

    KvMap kv = parse_kv(balance_kv(report, books_meta()), "balance.kv");
    for (std::size_t s = 0; s < kStratumCount; ++s)
        EXPECT_EQ(kv.get_u64(std::string("balance.original.") + kStratumKeys[s],
                             0),
                  before.n[s]);
    EXPECT_EQ(kv.get_u64("balance.original.total", 0), before.total());
    EXPECT_EQ(kv.get_u64("balance.target", 0), before.min());
    EXPECT_EQ(kv.get_u64("balance.total", 0), before.min() * kStratumCount);
    EXPECT_EQ(kv.get_u64("balance.seed", 0), 17u);
    EXPECT_EQ(kv.get_or("balance.rng", ""), kRngId);
}

TEST(SummaryRow, ExactStringWithDefinedRates) {
    SlicedReports perf;
    perf.overall = performance_from_counts(3, 0, 5, 0);
    perf.english = performance_from_counts(2, 0, 2, 0);
    perf.french = performance_from_counts(1, 0, 3, 0);

    GroupRates rates;
    rates.at(Language::English) = group_stats_from_counts(2, 0, 2, 0);
    rates.at(Language::French) = group_stats_from_counts(1, 0, 3, 0);
    FairnessReport fair = fairness_from_rates(rates, EorVariant::Product);

    RunMeta meta;
    meta.domain = "books";
    meta.model = "nb";
    meta.seed = 42;

    std::string row = summary_row(meta, perf, fair);
    EXPECT_EQ(row, "books,nb,42,product,8,1,1,1,1,1,1,0.25,0.5,0,1," +
                       std::string(kVersion));

    std::string header(kSummaryHeader);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','),
              std::count(row.begin(), row.end(), ','));
}

TEST(SummaryRow, UndefinedRatesLeaveEmptyCells) {
    SlicedReports perf;
    perf.overall = performance_from_counts(0, 1, 7, 0);
    perf.english = performance_from_counts(0, 1, 3, 0);
    perf.french = performance_from_counts(0, 0, 4, 0);

    GroupRates rates;
    rates.at(Language::English) = group_stats_from_counts(0, 1, 3, 0);
    rates.at(Language::French) = group_stats_from_counts(0, 0, 4, 0);
    FairnessReport fair = fairness_from_rates(rates, EorVariant::Product);
    ASSERT_FALSE(fair.eod.has_value());

    RunMeta meta;
    meta.domain = "dvd";
    meta.model = "svm";
    meta.seed = 7;
    std::string row = summary_row(meta, perf, fair);
    EXPECT_NE(row.find(",,,"), std::string::npos);
    EXPECT_EQ(row.substr(row.size() - std::string(kVersion).size()), kVersion);
}

TEST(TextReports, RenderTheEssentials) {
    fairsent::SplitMix64 rng(84);
    LabeledPredictions p = testgen::random_predictions(rng);
    SlicedReports reports = sliced_report(p);
    RunMeta meta = books_meta();

    std::string perf = performance_text(reports, meta);
    EXPECT_NE(perf.find("performance (svm)"), std::string::npos);
    EXPECT_NE(perf.find("domain: books"), std::string::npos);
    EXPECT_NE(perf.find("overall"), std::string::npos);
    EXPECT_NE(perf.find("english"), std::string::npos);
    EXPECT_NE(perf.find("french"), std::string::npos);
    EXPECT_NE(perf.find("deviations:"), std::string::npos);
    EXPECT_NE(perf.find(detail::format_fixed(reports.overall.accuracy)),
              std::string::npos);

    GroupRates rates;
    rates.at(Language::English) = group_stats_from_counts(0, 1, 3, 0);
    rates.at(Language::French) = group_stats_from_counts(2, 1, 2, 0);
    FairnessReport undefined_fair =
        fairness_from_rates(rates, EorVariant::Product);
    std::string fair = fairness_text(undefined_fair, meta);
    EXPECT_NE(fair.find("eor variant: product"), std::string::npos);
    EXPECT_NE(fair.find("undef"), std::string::npos);
    EXPECT_NE(fair.find("note:"), std::string::npos);
    EXPECT_NE(fair.find("deviations:"), std::string::npos);

    Corpus corpus = testgen::random_stratified_corpus(rng, 4, 6);
    auto [sampled, breport] = balance(corpus, 5);
    std::string bal = balance_text(breport, meta);
    EXPECT_NE(bal.find("en/positive"), std::string::npos);
    EXPECT_NE(bal.find("fr/negative"), std::string::npos);
    EXPECT_NE(bal.find(kRngId), std::string::npos);
    EXPECT_NE(bal.find("total"), std::string::npos);
}

}
