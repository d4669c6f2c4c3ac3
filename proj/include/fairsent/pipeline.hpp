#pragma once

// End-to-end run and tune pipelines behind the CLI. Everything here is
// deterministic given the config: one master seed feeds named sub-streams
// (balance, split, SVM epoch order, folds, trials), machine outputs carry
// no timestamps, and doubles print in shortest round-trip form, so a
// repeated run writes byte-identical files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fairsent/corpus.hpp"
#include "fairsent/errors.hpp"
#include "fairsent/features.hpp"
#include "fairsent/kv.hpp"
#include "fairsent/metrics.hpp"
#include "fairsent/models.hpp"
#include "fairsent/preprocess.hpp"
#include "fairsent/reports.hpp"
#include "fairsent/sampling.hpp"
#include "fairsent/tuning.hpp"
#include "fairsent/version.hpp"

namespace fairsent {

struct RunConfig {
    std::string domain = "data";
    std::vector<std::string> data_en;
    std::vector<std::string> data_fr;
    std::string stopwords_en;
    std::string stopwords_fr;
    bool lowercase = true;
    std::uint64_t min_term_length = 1;
    std::uint64_t seed = 42;
    double train_fraction = 0.8;
    std::string model = "both";  // nb | svm | both
    double alpha = 1.0;
    double c_param = 1.0;
    double tolerance = 1e-4;
    std::uint64_t max_epochs = 1000;
    EorVariant eor_variant = EorVariant::Product;
    std::string out_dir = "out";
};

// `paper` selects the product form (the formula the product-form reports
// use); `min` the min-component form common in fairness libraries.
inline EorVariant parse_eor_variant(const std::string& value) {
    if (value == "paper" || value == "product") return EorVariant::Product;
    if (value == "min" || value == "min-component")
        return EorVariant::MinComponent;
    throw ConfigError("eor variant must be 'paper' or 'min', got '" + value +
                      "'");
}

inline std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

inline RunConfig config_from_kv(const KvMap& kv, RunConfig base = {}) {
    base.domain = kv.get_or("domain", base.domain);
    if (auto v = kv.get("data.en")) base.data_en = split_list(*v);
    if (auto v = kv.get("data.fr")) base.data_fr = split_list(*v);
    base.stopwords_en = kv.get_or("stopwords.en", base.stopwords_en);
    base.stopwords_fr = kv.get_or("stopwords.fr", base.stopwords_fr);
    base.lowercase = kv.get_bool("lowercase", base.lowercase);
    base.min_term_length = kv.get_u64("min_term_length", base.min_term_length);
    base.seed = kv.get_u64("seed", base.seed);
    base.train_fraction = kv.get_double("train_fraction", base.train_fraction);
    base.model = kv.get_or("model", base.model);
    base.alpha = kv.get_double("alpha", base.alpha);
    base.c_param = kv.get_double("c", base.c_param);
    base.tolerance = kv.get_double("tolerance", base.tolerance);
    base.max_epochs = kv.get_u64("max_epochs", base.max_epochs);
    if (auto v = kv.get("eor_variant"))
        base.eor_variant = parse_eor_variant(*v);
    base.out_dir = kv.get_or("out", base.out_dir);
    return base;
}

inline void validate_config(const RunConfig& config) {
    if (config.model != "nb" && config.model != "svm" &&
        config.model != "both")
        throw ConfigError("model must be nb, svm, or both, got '" +
                          config.model + "'");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw ConfigError("train_fraction must lie in (0,1)");
    if (config.data_en.empty() || config.data_fr.empty())
        throw ConfigError("data.en and data.fr must each name at least one "
                          "file");
    for (const auto& paths : {config.data_en, config.data_fr})
        for (const auto& path : paths)
            if (!std::filesystem::exists(path))
                throw ConfigError("dataset file does not exist: " + path);
    for (const auto& path : {config.stopwords_en, config.stopwords_fr})
        if (!path.empty() && !std::filesystem::exists(path))
            throw ConfigError("stopword list does not exist: " + path);
}

inline std::vector<std::string> requested_models(const RunConfig& config) {
    if (config.model == "both") return {"nb", "svm"};
    return {config.model};
}

namespace detail {

template <typename F>
auto stage(const char* name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

}

inline Corpus load_configured_corpus(const RunConfig& config) {
    std::vector<Corpus> parts;
    for (const auto& path : config.data_en)
        parts.push_back(load_corpus(path, Language::English, config.domain));
    for (const auto& path : config.data_fr)
        parts.push_back(load_corpus(path, Language::French, config.domain));
    return merge(std::move(parts));
}

inline PreprocessConfig preprocess_config(const RunConfig& config) {
    PreprocessConfig pp;
    pp.lowercase = config.lowercase;
    pp.min_term_length = config.min_term_length;
    if (!config.stopwords_en.empty())
        pp.stopword_lists[Language::English] =
            load_stopwords(config.stopwords_en, config.lowercase);
    if (!config.stopwords_fr.empty())
        pp.stopword_lists[Language::French] =
            load_stopwords(config.stopwords_fr, config.lowercase);
    return pp;
}

struct ModelRunResult {
    std::string name;
    SlicedReports performance;
    FairnessReport fairness;
};

struct RunResult {
    SubgroupCounts loaded_counts;
    BalanceReport balance;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t vocab_size = 0;
    std::vector<ModelRunResult> models;
};

inline RunResult run_pipeline(const RunConfig& config) {
    using detail::stage;
    validate_config(config);

    Corpus corpus = stage("load", [&] { return load_configured_corpus(config); });
    RunResult result;
    result.loaded_counts = subgroup_counts(corpus);

    corpus = stage("preprocess",
                   [&] { return preprocess(corpus, preprocess_config(config)); });

    Corpus balanced;
    std::tie(balanced, result.balance) =
        stage("balance", [&] { return balance(corpus, config.seed); });

    auto [train, test] = stage("split", [&] {
        return split(balanced, SplitSpec{config.train_fraction, config.seed});
    });
    result.train_size = train.size();
    result.test_size = test.size();

    TfIdfModel tfidf = stage("features", [&] { return fit_tfidf(train); });
    result.vocab_size = tfidf.vocabulary.size();
    TransformedCorpus train_data = transform_corpus(tfidf, train);
    TransformedCorpus test_data = transform_corpus(tfidf, test);

    for (const std::string& name : requested_models(config)) {
        std::vector<Sentiment> predictions(test_data.matrix.size());
        stage("train", [&] {
            if (name == "nb") {
                NbModel model = nb_fit(train_data.matrix, train_data.labels,
                                       config.alpha, result.vocab_size);
                for (std::size_t i = 0; i < test_data.matrix.size(); ++i)
                    predictions[i] = nb_predict(model, test_data.matrix[i]).first;
            } else {
                TrainOptions options;
                options.tolerance = config.tolerance;
                options.max_iterations = config.max_epochs;
                options.seed = config.seed;
                SvmModel model =
                    svm_fit(train_data.matrix, train_data.labels,
                            config.c_param, options, result.vocab_size);
                for (std::size_t i = 0; i < test_data.matrix.size(); ++i)
                    predictions[i] = svm_predict(model, test_data.matrix[i]);
            }
            return 0;
        });

        LabeledPredictions p{test_data.labels, predictions, test_data.groups};
        ModelRunResult mr;
        mr.name = name;
        mr.performance = detail::stage("evaluate", [&] { return sliced_report(p); });
        mr.fairness = fairness_report(p, config.eor_variant);
        result.models.push_back(std::move(mr));
    }
    return result;
}

inline std::string resolved_config_kv(const RunConfig& config) {
    KvWriter kv;
    kv.add("meta.toolkit_version", kVersion);
    kv.add("meta.rng", kRngId);
    kv.add("meta.tfidf_log_base", "e");
    kv.add("meta.seed", config.seed);
    kv.add("meta.eor_variant", to_string(config.eor_variant));
    kv.add("domain", config.domain);
    kv.add("data.en", join_list(config.data_en));
    kv.add("data.fr", join_list(config.data_fr));
    kv.add("stopwords.en", config.stopwords_en);
    kv.add("stopwords.fr", config.stopwords_fr);
    kv.add("lowercase", config.lowercase);
    kv.add("min_term_length", config.min_term_length);
    kv.add("seed", config.seed);
    kv.add("train_fraction", config.train_fraction);
    kv.add("model", config.model);
    kv.add("alpha", config.alpha);
    kv.add("c", config.c_param);
    kv.add("tolerance", config.tolerance);
    kv.add("max_epochs", config.max_epochs);
    kv.add("eor_variant", to_string(config.eor_variant));
    kv.add("out", config.out_dir);
    return kv.str();
}

namespace detail {

inline void write_text_file(const std::string& path,
                            const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out)
        throw IoError("write failure on " + path);
}

}

// Writes every artifact for a completed run; returns the paths written.
inline std::vector<std::string> write_run_artifacts(const RunResult& result,
                                                    const RunConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    std::vector<std::string> written;
    auto out_path = [&](const std::string& name) {
        return (fs::path(config.out_dir) / name).string();
    };
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = out_path(name);
        detail::write_text_file(path, content);
        written.push_back(path);
    };

    RunMeta meta;
    meta.domain = config.domain;
    meta.seed = config.seed;
    meta.eor_variant = config.eor_variant;

    emit("resolved_config.kv", resolved_config_kv(config));
    emit("balance.kv", balance_kv(result.balance, meta));

    std::string summary = std::string(kSummaryHeader) + "\n";
    for (const ModelRunResult& mr : result.models) {
        RunMeta model_meta = meta;
        model_meta.model = mr.name;
        emit("performance_" + mr.name + ".txt",
             performance_text(mr.performance, model_meta));
        emit("performance_" + mr.name + ".kv",
             performance_kv(mr.performance, model_meta));
        emit("fairness_" + mr.name + ".txt",
             fairness_text(mr.fairness, model_meta));
        emit("fairness_" + mr.name + ".kv",
             fairness_kv(mr.fairness, model_meta));
        summary += summary_row(model_meta, mr.performance, mr.fairness) + "\n";
    }
    emit("summary.csv", summary);
    return written;
}

struct TuneOptions {
    std::uint64_t trials = 25;
    std::uint64_t k = 5;
    bool grid = false;
    std::vector<double> grid_values;  // choice set when grid is on
};

struct TuneResult {
    std::map<std::string, SearchResult> by_model;  // keyed nb / svm
    std::map<std::string, SearchSpace> spaces;
};

inline TuneResult tune_pipeline(const RunConfig& config,
                                const TuneOptions& options) {
    using detail::stage;
    validate_config(config);
    if (options.trials < 1)
        throw ConfigError("trials must be at least 1");
    if (options.grid && options.grid_values.empty())
        throw ConfigError("grid search needs at least one value");

    Corpus corpus = stage("load", [&] { return load_configured_corpus(config); });
    corpus = stage("preprocess",
                   [&] { return preprocess(corpus, preprocess_config(config)); });
    auto [balanced, balance_report] =
        stage("balance", [&] { return balance(corpus, config.seed); });
    auto [train, test] = stage("split", [&] {
        return split(balanced, SplitSpec{config.train_fraction, config.seed});
    });
    TfIdfModel tfidf = stage("features", [&] { return fit_tfidf(train); });
    TransformedCorpus data = transform_corpus(tfidf, train);

    TrainOptions svm_options;
    svm_options.tolerance = config.tolerance;
    svm_options.max_iterations = config.max_epochs;

    TuneResult result;
    for (const std::string& name : requested_models(config)) {
        ModelKind kind = name == "nb" ? ModelKind::Nb : ModelKind::Svm;
        SearchSpace space = default_space(kind);
        if (options.grid) {
            space.params.clear();
            space.params.emplace(kind == ModelKind::Nb ? "alpha" : "c",
                                 Choice{options.grid_values});
        }
        result.spaces[name] = space;
        result.by_model[name] = stage("search", [&] {
            if (options.grid)
                return run_grid(data.matrix, data.labels,
                                tfidf.vocabulary.size(), kind, space,
                                options.k, config.seed, svm_options);
            return run_search(data.matrix, data.labels,
                              tfidf.vocabulary.size(), kind, space,
                              options.trials, options.k, config.seed,
                              svm_options);
        });
    }
    return result;
}

// search_log_<model>.csv per model plus one best_params.kv whose keys are
// directly consumable as a run config.
inline std::vector<std::string> write_tune_artifacts(
    const TuneResult& result, const RunConfig& config,
    const TuneOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    std::vector<std::string> written;

    KvWriter best;
    best.add("meta.toolkit_version", kVersion);
    best.add("meta.rng", kRngId);
    best.add("meta.seed", config.seed);
    for (const auto& [name, search] : result.by_model) {
        std::string path =
            (fs::path(config.out_dir) / ("search_log_" + name + ".csv"))
                .string();
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + path + " for writing");
        write_search_log(out, result.spaces.at(name), search.log, options.k);
        if (!out)
            throw IoError("write failure on " + path);
        written.push_back(path);
        for (const auto& [param, value] : search.best.params)
            best.add(param, value);
        best.add("tune." + name + ".mean_accuracy",
                 search.best.mean_accuracy);
        best.add("tune." + name + ".trial", search.best.trial);
    }
    std::string best_path =
        (fs::path(config.out_dir) / "best_params.kv").string();
    detail::write_text_file(best_path, best.str());
    written.push_back(best_path);
    return written;
}

}
