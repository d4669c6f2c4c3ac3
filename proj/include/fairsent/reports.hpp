#pragma once

// Report rendering. Every artifact is written twice: a plain-text table for
// reading and a key-value file for machines. The kv files carry the full
// confusion counts, so tables can be re-rendered from them alone, and they
// embed the metadata needed to reconstruct the run (toolkit version, seeds,
// PRNG id, tf-idf log base, EOR variant). A fixed "deviations" block names
// the pipeline choices that commonly differ between implementations.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsent/kv.hpp"
#include "fairsent/metrics.hpp"
#include "fairsent/rng.hpp"
#include "fairsent/sampling.hpp"
#include "fairsent/text.hpp"
#include "fairsent/version.hpp"

namespace fairsent {

struct RunMeta {
    std::string domain;
    std::uint64_t seed = 0;
    EorVariant eor_variant = EorVariant::Product;
    std::string model;  // nb / svm; empty where not applicable
};

inline const std::vector<std::pair<std::string, std::string>>& deviations() {
    static const std::vector<std::pair<std::string, std::string>> kDeviations =
        {
            {"tokenization",
             "lowercase + stopword filtering only; no lemmatization, no "
             "named-entity filtering"},
            {"tfidf",
             "tf = count / document mass, idf = ln(N/df); no +1 smoothing, "
             "no L2 row normalization"},
            {"svm", "linear kernel, L1 hinge, dual coordinate descent; bias "
                    "folded into the regularized weights"},
            {"search", "seeded random search (uniform / log-uniform), not "
                       "adaptive sampling"},
        };
    return kDeviations;
}

namespace detail {

inline void add_meta(KvWriter& kv, const RunMeta& meta) {
    kv.add("meta.toolkit_version", kVersion);
    kv.add("meta.rng", kRngId);
    kv.add("meta.tfidf_log_base", "e");
    kv.add("meta.seed", meta.seed);
    kv.add("meta.eor_variant", to_string(meta.eor_variant));
    if (!meta.domain.empty()) kv.add("meta.domain", meta.domain);
    if (!meta.model.empty()) kv.add("meta.model", meta.model);
}

inline void add_deviations(KvWriter& kv) {
    for (const auto& [key, value] : deviations())
        kv.add("deviations." + key, value);
}

inline std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline std::string pad_left(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

inline std::string meta_header(std::string_view kind, const RunMeta& meta) {
    std::string head(kind);
    if (!meta.model.empty()) head += " (" + meta.model + ")";
    head += '\n';
    head += "domain: " + (meta.domain.empty() ? "-" : meta.domain);
    head += "   seed: " + std::to_string(meta.seed);
    head += "   toolkit: ";
    head += kVersion;
    head += '\n';
    return head;
}

inline std::string deviations_text() {
    std::string out = "deviations:\n";
    for (const auto& [key, value] : deviations())
        out += "  " + key + ": " + value + "\n";
    return out;
}

inline const char* kSliceNames[3] = {"overall", "english", "french"};

}

inline std::string performance_kv(const SlicedReports& reports,
                                  const RunMeta& meta) {
    KvWriter kv;
    detail::add_meta(kv, meta);
    const PerformanceReport* slices[3] = {&reports.overall, &reports.english,
                                          &reports.french};
    for (int s = 0; s < 3; ++s) {
        const PerformanceReport& r = *slices[s];
        std::string p = detail::kSliceNames[s];
        kv.add(p + ".n", r.n);
        kv.add(p + ".tp", r.tp);
        kv.add(p + ".fp", r.fp);
        kv.add(p + ".tn", r.tn);
        kv.add(p + ".fn", r.fn);
        kv.add(p + ".accuracy", r.accuracy);
        for (const auto& [name, m] : {std::pair{"positive", &r.positive},
                                      std::pair{"negative", &r.negative}}) {
            kv.add(p + "." + name + ".precision", m->precision);
            kv.add(p + "." + name + ".recall", m->recall);
            kv.add(p + "." + name + ".f1", m->f1);
            kv.add(p + "." + name + ".support", m->support);
            kv.add(p + "." + name + ".zero_division", m->zero_division);
        }
        kv.add(p + ".macro.precision", r.macro_precision);
        kv.add(p + ".macro.recall", r.macro_recall);
        kv.add(p + ".macro.f1", r.macro_f1);
        kv.add(p + ".weighted.precision", r.weighted_precision);
        kv.add(p + ".weighted.recall", r.weighted_recall);
        kv.add(p + ".weighted.f1", r.weighted_f1);
    }
    detail::add_deviations(kv);
    return kv.str();
}

inline SlicedReports performance_from_kv(const KvMap& kv) {
    auto counts = [&](const std::string& p) {
        return performance_from_counts(
            kv.get_u64(p + ".tp", 0), kv.get_u64(p + ".fp", 0),
            kv.get_u64(p + ".tn", 0), kv.get_u64(p + ".fn", 0));
    };
    SlicedReports out;
    out.overall = counts("overall");
    out.english = counts("english");
    out.french = counts("french");
    return out;
}

inline std::string performance_text(const SlicedReports& reports,
                                    const RunMeta& meta) {
    using detail::pad_left;
    using detail::pad_right;
    std::string out = detail::meta_header("performance", meta);
    out += '\n';
    out += pad_right("slice", 9) + pad_left("n", 7) + pad_left("accuracy", 10) +
           pad_left("precision", 11) + pad_left("recall", 8) +
           pad_left("f1", 8) + '\n';
    const PerformanceReport* slices[3] = {&reports.overall, &reports.english,
                                          &reports.french};
    for (int s = 0; s < 3; ++s) {
        const PerformanceReport& r = *slices[s];
        out += pad_right(detail::kSliceNames[s], 9) +
               pad_left(std::to_string(r.n), 7) +
               pad_left(detail::format_fixed(r.accuracy), 10) +
               pad_left(detail::format_fixed(r.weighted_precision), 11) +
               pad_left(detail::format_fixed(r.weighted_recall), 8) +
               pad_left(detail::format_fixed(r.weighted_f1), 8) + '\n';
    }
    out += "(precision/recall/f1 are support-weighted across classes)\n\n";

    out += pad_right("slice", 9) + pad_left("macro_p", 9) +
           pad_left("macro_r", 9) + pad_left("macro_f1", 10) +
           pad_left("tp", 7) + pad_left("fp", 7) + pad_left("tn", 7) +
           pad_left("fn", 7) + '\n';
    for (int s = 0; s < 3; ++s) {
        const PerformanceReport& r = *slices[s];
        out += pad_right(detail::kSliceNames[s], 9) +
               pad_left(detail::format_fixed(r.macro_precision), 9) +
               pad_left(detail::format_fixed(r.macro_recall), 9) +
               pad_left(detail::format_fixed(r.macro_f1), 10) +
               pad_left(std::to_string(r.tp), 7) +
               pad_left(std::to_string(r.fp), 7) +
               pad_left(std::to_string(r.tn), 7) +
               pad_left(std::to_string(r.fn), 7) + '\n';
    }
    out += '\n';
    out += detail::deviations_text();
    return out;
}

inline std::string fairness_kv(const FairnessReport& report,
                               const RunMeta& meta) {
    KvWriter kv;
    detail::add_meta(kv, meta);
    kv.add("fairness.dpd", report.dpd);
    kv.add("fairness.dpr", report.dpr);
    kv.add("fairness.eod.defined", report.eod.has_value());
    if (report.eod) kv.add("fairness.eod", *report.eod);
    kv.add("fairness.eor.defined", report.eor.has_value());
    if (report.eor) kv.add("fairness.eor", *report.eor);
    kv.add("fairness.eor_variant", to_string(report.eor_variant));
    kv.add("fairness.note", report.definitions_note);
    for (Language l : {Language::English, Language::French}) {
        const GroupStats& g = report.rates.at(l);
        std::string p = std::string("group.") + to_string(l);
        kv.add(p + ".n", g.n);
        kv.add(p + ".tp", g.tp);
        kv.add(p + ".fp", g.fp);
        kv.add(p + ".tn", g.tn);
        kv.add(p + ".fn", g.fn);
        kv.add(p + ".selection_rate", g.selection_rate);
        kv.add(p + ".tpr.defined", g.tpr.has_value());
        if (g.tpr) kv.add(p + ".tpr", *g.tpr);
        kv.add(p + ".fpr.defined", g.fpr.has_value());
        if (g.fpr) kv.add(p + ".fpr", *g.fpr);
    }
    detail::add_deviations(kv);
    return kv.str();
}

inline FairnessReport fairness_from_kv(const KvMap& kv) {
    GroupRates rates;
    for (Language l : {Language::English, Language::French}) {
        std::string p = std::string("group.") + to_string(l);
        rates.at(l) = group_stats_from_counts(
            kv.get_u64(p + ".tp", 0), kv.get_u64(p + ".fp", 0),
            kv.get_u64(p + ".tn", 0), kv.get_u64(p + ".fn", 0));
    }
    EorVariant variant =
        kv.get_or("fairness.eor_variant", "product") == "min-component"
            ? EorVariant::MinComponent
            : EorVariant::Product;
    return fairness_from_rates(std::move(rates), variant);
}

inline std::string fairness_text(const FairnessReport& report,
                                 const RunMeta& meta) {
    using detail::pad_left;
    using detail::pad_right;
    std::string out = detail::meta_header("fairness", meta);
    out += "eor variant: ";
    out += to_string(report.eor_variant);
    out += "\n\n";
    auto row = [&](const char* name, const std::optional<double>& v) {
        out += pad_right(name, 6);
        out += v ? pad_left(detail::format_fixed(*v), 8) : pad_left("undef", 8);
        out += '\n';
    };
    row("dpd", report.dpd);
    row("dpr", report.dpr);
    row("eod", report.eod);
    row("eor", report.eor);
    out += '\n';
    out += pad_right("group", 9) + pad_left("n", 7) + pad_left("sel_rate", 10) +
           pad_left("tpr", 9) + pad_left("fpr", 9) + '\n';
    for (Language l : {Language::English, Language::French}) {
        const GroupStats& g = report.rates.at(l);
        auto rate = [](const std::optional<double>& v) {
            return v ? detail::format_fixed(*v) : std::string("undef");
        };
        out += pad_right(to_string(l), 9) + pad_left(std::to_string(g.n), 7) +
               pad_left(detail::format_fixed(g.selection_rate), 10) +
               pad_left(rate(g.tpr), 9) + pad_left(rate(g.fpr), 9) + '\n';
    }
    out += "\nnote: " + report.definitions_note + "\n\n";
    out += detail::deviations_text();
    return out;
}

inline constexpr const char* kStratumKeys[kStratumCount] = {
    "en_positive", "en_negative", "fr_positive", "fr_negative"};

inline std::string balance_kv(const BalanceReport& report,
                              const RunMeta& meta) {
    KvWriter kv;
    detail::add_meta(kv, meta);
    for (std::size_t s = 0; s < kStratumCount; ++s)
        kv.add(std::string("balance.original.") + kStratumKeys[s],
               report.original.n[s]);
    kv.add("balance.original.total", report.original.total());
    kv.add("balance.target", report.target);
    kv.add("balance.total", report.target * kStratumCount);
    kv.add("balance.seed", report.seed);
    kv.add("balance.rng", report.rng);
    return kv.str();
}

inline std::string balance_text(const BalanceReport& report,
                                const RunMeta& meta) {
    using detail::pad_left;
    using detail::pad_right;
    std::string out = detail::meta_header("balance", meta);
    out += '\n';
    out += pad_right("subgroup", 13) + pad_left("original", 10) +
           pad_left("sampled", 9) + '\n';
    for (std::size_t s = 0; s < kStratumCount; ++s)
        out += pad_right(stratum_name(s), 13) +
               pad_left(std::to_string(report.original.n[s]), 10) +
               pad_left(std::to_string(report.target), 9) + '\n';
    out += pad_right("total", 13) +
           pad_left(std::to_string(report.original.total()), 10) +
           pad_left(std::to_string(report.target * kStratumCount), 9) + '\n';
    out += "rng: " + report.rng + "\n";
    return out;
}

// One summary row per (domain, model) run; eod/eor cells are empty when
// undefined. Callers prepend kSummaryHeader once per file.
inline constexpr const char* kSummaryHeader =
    "domain,model,seed,eor_variant,n_test,accuracy,accuracy_en,accuracy_fr,"
    "precision_weighted,recall_weighted,f1_weighted,dpd,dpr,eod,eor,"
    "toolkit_version";

inline std::string summary_row(const RunMeta& meta,
                               const SlicedReports& performance,
                               const FairnessReport& fairness) {
    std::string row = meta.domain + "," + meta.model + "," +
                      std::to_string(meta.seed) + "," +
                      to_string(fairness.eor_variant) + "," +
                      std::to_string(performance.overall.n) + "," +
                      detail::format_double(performance.overall.accuracy) +
                      "," +
                      detail::format_double(performance.english.accuracy) +
                      "," +
                      detail::format_double(performance.french.accuracy) +
                      "," +
                      detail::format_double(
                          performance.overall.weighted_precision) +
                      "," +
                      detail::format_double(
                          performance.overall.weighted_recall) +
                      "," +
                      detail::format_double(performance.overall.weighted_f1) +
                      "," + detail::format_double(fairness.dpd) + "," +
                      detail::format_double(fairness.dpr) + ",";
    if (fairness.eod) row += detail::format_double(*fairness.eod);
    row += ",";
    if (fairness.eor) row += detail::format_double(*fairness.eor);
    row += ",";
    row += kVersion;
    return row;
}

inline RunMeta meta_from_kv(const KvMap& kv) {
    RunMeta meta;
    meta.domain = kv.get_or("meta.domain", "");
    meta.seed = kv.get_u64("meta.seed", 0);
    meta.model = kv.get_or("meta.model", "");
    meta.eor_variant =
        kv.get_or("meta.eor_variant", "product") == "min-component"
            ? EorVariant::MinComponent
            : EorVariant::Product;
    return meta;
}

}
