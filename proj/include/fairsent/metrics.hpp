#pragma once

// Performance metrics (accuracy, precision/recall/F1 with macro and weighted
// aggregates) and the four group-fairness metrics over the language groups:
// demographic parity difference/ratio, equalized odds difference/ratio.
// Positive sentiment is the positive class throughout. Rates whose base
// population is empty carry an explicit undefined flag instead of a value.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsent/corpus.hpp"
#include "fairsent/errors.hpp"

namespace fairsent {

struct LabeledPredictions {
    std::vector<Sentiment> y_true;
    std::vector<Sentiment> y_pred;
    std::vector<Language> group;
};

struct GroupStats {
    std::size_t n = 0;
    std::size_t n_pos_true = 0;
    std::size_t n_neg_true = 0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double selection_rate = 0.0;
    std::optional<double> tpr;  // empty when n_pos_true = 0
    std::optional<double> fpr;  // empty when n_neg_true = 0
};

struct GroupRates {
    std::array<GroupStats, 2> by_group;  // [English, French]

    const GroupStats& at(Language l) const {
        return by_group[static_cast<std::size_t>(l)];
    }
    GroupStats& at(Language l) {
        return by_group[static_cast<std::size_t>(l)];
    }
};

// Rates are pure functions of the confusion counts; exposing this lets
// persisted counts be re-expanded without the original predictions.
inline GroupStats group_stats_from_counts(std::size_t tp, std::size_t fp,
                                          std::size_t tn, std::size_t fn) {
    GroupStats g;
    g.tp = tp;
    g.fp = fp;
    g.tn = tn;
    g.fn = fn;
    g.n_pos_true = tp + fn;
    g.n_neg_true = fp + tn;
    g.n = g.n_pos_true + g.n_neg_true;
    if (g.n == 0) return g;
    g.selection_rate =
        static_cast<double>(g.tp + g.fp) / static_cast<double>(g.n);
    if (g.n_pos_true > 0)
        g.tpr = static_cast<double>(g.tp) / static_cast<double>(g.n_pos_true);
    if (g.n_neg_true > 0)
        g.fpr = static_cast<double>(g.fp) / static_cast<double>(g.n_neg_true);
    return g;
}

inline GroupRates group_rates(const LabeledPredictions& p) {
    if (p.y_true.size() != p.y_pred.size() ||
        p.y_true.size() != p.group.size())
        throw ConfigError("prediction lists are not aligned");
    if (p.y_true.empty())
        throw EmptyCorpusError();

    std::array<std::array<std::size_t, 4>, 2> counts{};  // tp, fp, tn, fn
    for (std::size_t i = 0; i < p.y_true.size(); ++i) {
        auto& c = counts[static_cast<std::size_t>(p.group[i])];
        bool truth = p.y_true[i] == Sentiment::Positive;
        bool pred = p.y_pred[i] == Sentiment::Positive;
        if (truth)
            c[pred ? 0 : 3] += 1;
        else
            c[pred ? 1 : 2] += 1;
    }
    GroupRates rates;
    for (Language l : {Language::English, Language::French}) {
        const auto& c = counts[static_cast<std::size_t>(l)];
        rates.at(l) = group_stats_from_counts(c[0], c[1], c[2], c[3]);
        if (rates.at(l).n == 0)
            throw EmptyGroupError(to_string(l));
    }
    return rates;
}

inline double demographic_parity_difference(const GroupRates& r) {
    return std::fabs(r.by_group[0].selection_rate -
                     r.by_group[1].selection_rate);
}

namespace detail {

// min/max ratio with the zero conventions: both zero reads as perfect
// parity (1), exactly one zero as maximal disparity (0).
inline double min_max_ratio(double a, double b) {
    double lo = std::min(a, b), hi = std::max(a, b);
    if (hi == 0.0) return 1.0;
    if (lo == 0.0) return 0.0;
    return lo / hi;
}

}

inline double demographic_parity_ratio(const GroupRates& r) {
    return detail::min_max_ratio(r.by_group[0].selection_rate,
                                 r.by_group[1].selection_rate);
}

inline double equalized_odds_difference(const GroupRates& r) {
    const GroupStats& a = r.by_group[0];
    const GroupStats& b = r.by_group[1];
    if (!a.tpr || !b.tpr)
        throw UndefinedRateError("tpr");
    if (!a.fpr || !b.fpr)
        throw UndefinedRateError("fpr");
    return std::max(std::fabs(*a.tpr - *b.tpr), std::fabs(*a.fpr - *b.fpr));
}

enum class EorVariant { Product, MinComponent };

inline const char* to_string(EorVariant v) {
    return v == EorVariant::Product ? "product" : "min-component";
}

inline double equalized_odds_ratio(const GroupRates& r, EorVariant variant) {
    const GroupStats& a = r.by_group[0];
    const GroupStats& b = r.by_group[1];
    if (!a.tpr || !b.tpr)
        throw UndefinedRateError("tpr");
    if (!a.fpr || !b.fpr)
        throw UndefinedRateError("fpr");
    double tpr_ratio = detail::min_max_ratio(*a.tpr, *b.tpr);
    double fpr_ratio = detail::min_max_ratio(*a.fpr, *b.fpr);
    return variant == EorVariant::Product ? tpr_ratio * fpr_ratio
                                          : std::min(tpr_ratio, fpr_ratio);
}

struct FairnessReport {
    double dpd = 0.0;
    double dpr = 1.0;
    std::optional<double> eod;  // empty when any base rate is undefined
    std::optional<double> eor;
    GroupRates rates;
    EorVariant eor_variant = EorVariant::Product;
    std::string definitions_note;
};

inline FairnessReport fairness_from_rates(GroupRates rates,
                                          EorVariant variant) {
    FairnessReport report;
    report.rates = std::move(rates);
    report.dpd = demographic_parity_difference(report.rates);
    report.dpr = demographic_parity_ratio(report.rates);
    report.eor_variant = variant;
    bool defined = true;
    for (const GroupStats& g : report.rates.by_group)
        if (!g.tpr || !g.fpr) defined = false;
    if (defined) {
        report.eod = equalized_odds_difference(report.rates);
        report.eor = equalized_odds_ratio(report.rates, variant);
    }
    report.definitions_note =
        variant == EorVariant::Product
            ? "eor = (min TPR / max TPR) * (min FPR / max FPR)"
            : "eor = min(min TPR / max TPR, min FPR / max FPR)";
    if (!defined)
        report.definitions_note += "; eod/eor undefined: a group has an "
                                   "empty base population";
    return report;
}

inline FairnessReport fairness_report(const LabeledPredictions& p,
                                      EorVariant variant) {
    return fairness_from_rates(group_rates(p), variant);
}

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    bool zero_division = false;  // some denominator was 0, value reported as 0
};

struct PerformanceReport {
    std::size_t n = 0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    ClassMetrics positive;
    ClassMetrics negative;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
};

namespace detail {

inline double safe_div(std::size_t num, std::size_t den, bool& flag) {
    if (den == 0) {
        flag = true;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

inline void fill_class(ClassMetrics& m, std::size_t tp, std::size_t fp,
                       std::size_t fn) {
    m.precision = safe_div(tp, tp + fp, m.zero_division);
    m.recall = safe_div(tp, tp + fn, m.zero_division);
    double pr = m.precision + m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
    m.support = tp + fn;
}

}

inline PerformanceReport performance_from_counts(std::size_t tp,
                                                 std::size_t fp,
                                                 std::size_t tn,
                                                 std::size_t fn) {
    PerformanceReport r;
    r.tp = tp;
    r.fp = fp;
    r.tn = tn;
    r.fn = fn;
    r.n = tp + fp + tn + fn;
    if (r.n == 0)
        throw EmptyCorpusError();
    r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.n);
    detail::fill_class(r.positive, r.tp, r.fp, r.fn);
    // For the negative class the roles mirror: tn is its "tp".
    detail::fill_class(r.negative, r.tn, r.fn, r.fp);

    r.macro_precision = 0.5 * (r.positive.precision + r.negative.precision);
    r.macro_recall = 0.5 * (r.positive.recall + r.negative.recall);
    r.macro_f1 = 0.5 * (r.positive.f1 + r.negative.f1);
    double n = static_cast<double>(r.n);
    double wp = static_cast<double>(r.positive.support);
    double wn = static_cast<double>(r.negative.support);
    r.weighted_precision =
        (wp * r.positive.precision + wn * r.negative.precision) / n;
    r.weighted_recall = (wp * r.positive.recall + wn * r.negative.recall) / n;
    r.weighted_f1 = (wp * r.positive.f1 + wn * r.negative.f1) / n;
    return r;
}

inline PerformanceReport performance_report(
    const std::vector<Sentiment>& y_true,
    const std::vector<Sentiment>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw ConfigError("prediction lists are not aligned");
    if (y_true.empty())
        throw EmptyCorpusError();

    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        bool truth = y_true[i] == Sentiment::Positive;
        bool pred = y_pred[i] == Sentiment::Positive;
        if (truth)
            (pred ? tp : fn) += 1;
        else
            (pred ? fp : tn) += 1;
    }
    return performance_from_counts(tp, fp, tn, fn);
}

struct SlicedReports {
    PerformanceReport overall;
    PerformanceReport english;
    PerformanceReport french;
};

inline SlicedReports sliced_report(const LabeledPredictions& p) {
    if (p.y_true.size() != p.y_pred.size() ||
        p.y_true.size() != p.group.size())
        throw ConfigError("prediction lists are not aligned");
    std::array<std::vector<Sentiment>, 2> truths, preds;
    for (std::size_t i = 0; i < p.y_true.size(); ++i) {
        auto g = static_cast<std::size_t>(p.group[i]);
        truths[g].push_back(p.y_true[i]);
        preds[g].push_back(p.y_pred[i]);
    }
    for (Language l : {Language::English, Language::French})
        if (truths[static_cast<std::size_t>(l)].empty())
            throw EmptyGroupError(to_string(l));

    SlicedReports out;
    out.overall = performance_report(p.y_true, p.y_pred);
    out.english = performance_report(truths[0], preds[0]);
    out.french = performance_report(truths[1], preds[1]);
    return out;
}

}
