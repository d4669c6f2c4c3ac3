// fairsent: bilingual sentiment pipeline and bias audit tool.
//
//   inspect  parse corpora and print document/label/subgroup counts
//   balance  apply the minimum-subgroup rule and report the result
//   run      full pipeline: load -> preprocess -> balance -> split ->
//            tf-idf -> train -> evaluate -> write reports
//   tune     cross-validated hyperparameter search
//   report   re-render a run's machine-readable outputs as tables

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairsent/pipeline.hpp"
#include "fairsent/version.hpp"

namespace {

using namespace fairsent;

struct CommonOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string model;
    double alpha = 0.0;
    double c_param = 0.0;
    double train_fraction = 0.0;
    std::string eor_variant;
    std::string out_dir;
    std::vector<std::string> data_en;
    std::vector<std::string> data_fr;
    std::string domain;
    std::string stopwords_en;
    std::string stopwords_fr;
    bool no_lowercase = false;
    std::uint64_t min_term_length = 0;
    double tolerance = 0.0;
    std::uint64_t max_epochs = 0;

    CLI::Option* config_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* c_opt = nullptr;
    CLI::Option* fraction_opt = nullptr;
    CLI::Option* eor_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* en_opt = nullptr;
    CLI::Option* fr_opt = nullptr;
    CLI::Option* domain_opt = nullptr;
    CLI::Option* sw_en_opt = nullptr;
    CLI::Option* sw_fr_opt = nullptr;
    CLI::Option* no_lower_opt = nullptr;
    CLI::Option* min_len_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* epochs_opt = nullptr;
};

void add_common_options(CLI::App* cmd, CommonOptions& o) {
    o.config_opt = cmd->add_option("--config", o.config_path,
                                   "key-value config file; flags override it");
    o.seed_opt = cmd->add_option("--seed", o.seed, "master seed");
    o.model_opt = cmd->add_option("--model", o.model, "nb, svm, or both");
    o.alpha_opt = cmd->add_option("--alpha", o.alpha, "nb smoothing");
    o.c_opt = cmd->add_option("--c", o.c_param, "svm penalty");
    o.fraction_opt = cmd->add_option("--train-fraction", o.train_fraction,
                                     "train share of the split, in (0,1)");
    o.eor_opt = cmd->add_option(
        "--eor-variant", o.eor_variant,
        "equalized-odds-ratio form: 'paper' multiplies the TPR and FPR "
        "ratios, 'min' takes the smaller of the two");
    o.out_opt = cmd->add_option("--out", o.out_dir, "output directory");
    o.en_opt = cmd->add_option("--en", o.data_en,
                               "English .processed file (repeatable)");
    o.fr_opt = cmd->add_option("--fr", o.data_fr,
                               "French .processed file (repeatable)");
    o.domain_opt = cmd->add_option("--domain", o.domain,
                                   "domain name for reports");
    o.sw_en_opt = cmd->add_option("--stopwords-en", o.stopwords_en,
                                  "English stopword list");
    o.sw_fr_opt = cmd->add_option("--stopwords-fr", o.stopwords_fr,
                                  "French stopword list");
    o.no_lower_opt =
        cmd->add_flag("--no-lowercase", o.no_lowercase, "keep letter case");
    o.min_len_opt = cmd->add_option("--min-term-length", o.min_term_length,
                                    "drop terms shorter than this many "
                                    "code points");
    o.tol_opt = cmd->add_option("--tolerance", o.tolerance,
                                "svm stopping tolerance");
    o.epochs_opt = cmd->add_option("--max-epochs", o.max_epochs,
                                   "svm epoch cap");
}

RunConfig resolve_config(const CommonOptions& o) {
    RunConfig config;
    if (o.config_opt->count() > 0)
        config = config_from_kv(read_kv(o.config_path), config);
    if (o.seed_opt->count() > 0) config.seed = o.seed;
    if (o.model_opt->count() > 0) config.model = o.model;
    if (o.alpha_opt->count() > 0) config.alpha = o.alpha;
    if (o.c_opt->count() > 0) config.c_param = o.c_param;
    if (o.fraction_opt->count() > 0) config.train_fraction = o.train_fraction;
    if (o.eor_opt->count() > 0)
        config.eor_variant = parse_eor_variant(o.eor_variant);
    if (o.out_opt->count() > 0) config.out_dir = o.out_dir;
    if (o.en_opt->count() > 0) config.data_en = o.data_en;
    if (o.fr_opt->count() > 0) config.data_fr = o.data_fr;
    if (o.domain_opt->count() > 0) config.domain = o.domain;
    if (o.sw_en_opt->count() > 0) config.stopwords_en = o.stopwords_en;
    if (o.sw_fr_opt->count() > 0) config.stopwords_fr = o.stopwords_fr;
    if (o.no_lower_opt->count() > 0) config.lowercase = false;
    if (o.min_len_opt->count() > 0) config.min_term_length = o.min_term_length;
    if (o.tol_opt->count() > 0) config.tolerance = o.tolerance;
    if (o.epochs_opt->count() > 0) config.max_epochs = o.max_epochs;
    return config;
}

int cmd_inspect(const std::vector<std::string>& en_paths,
                const std::vector<std::string>& fr_paths,
                const std::string& domain) {
    using fairsent::detail::pad_left;
    using fairsent::detail::pad_right;
    std::vector<Corpus> parts;
    std::cout << pad_right("file", 44) + pad_right("language", 10) +
                     pad_left("docs", 8) + pad_left("positive", 10) +
                     pad_left("negative", 10)
              << '\n';
    auto inspect_one = [&](const std::string& path, Language lang) {
        Corpus corpus = load_corpus(path, lang, domain);
        std::size_t pos = 0;
        for (const auto& doc : corpus.docs)
            if (doc.label == Sentiment::Positive) ++pos;
        std::cout << pad_right(path, 44) + pad_right(to_string(lang), 10) +
                         pad_left(std::to_string(corpus.size()), 8) +
                         pad_left(std::to_string(pos), 10) +
                         pad_left(std::to_string(corpus.size() - pos), 10)
                  << '\n';
        parts.push_back(std::move(corpus));
    };
    for (const auto& path : en_paths) inspect_one(path, Language::English);
    for (const auto& path : fr_paths) inspect_one(path, Language::French);

    Corpus merged = merge(std::move(parts));
    SubgroupCounts counts = subgroup_counts(merged);
    std::cout << '\n'
              << pad_right("subgroup", 13) + pad_left("docs", 8) << '\n';
    for (std::size_t s = 0; s < kStratumCount; ++s)
        std::cout << pad_right(stratum_name(s), 13) +
                         pad_left(std::to_string(counts.n[s]), 8)
                  << '\n';
    std::cout << pad_right("total", 13) +
                     pad_left(std::to_string(counts.total()), 8)
              << '\n';
    std::size_t en_total = counts.at(Language::English, Sentiment::Positive) +
                           counts.at(Language::English, Sentiment::Negative);
    std::cout << "en: " << en_total << "  fr: " << counts.total() - en_total
              << '\n';
    return 0;
}

int cmd_balance(const CommonOptions& options) {
    RunConfig config = resolve_config(options);
    validate_config(config);
    Corpus corpus = load_configured_corpus(config);
    corpus = preprocess(corpus, preprocess_config(config));
    auto [balanced, report] = balance(corpus, config.seed);

    RunMeta meta;
    meta.domain = config.domain;
    meta.seed = config.seed;
    meta.eor_variant = config.eor_variant;
    std::cout << balance_text(report, meta);
    if (options.out_opt->count() > 0) {
        std::filesystem::create_directories(config.out_dir);
        std::string path =
            (std::filesystem::path(config.out_dir) / "balance.kv").string();
        fairsent::detail::write_text_file(path, balance_kv(report, meta));
        std::cout << "wrote " << path << '\n';
    }
    return 0;
}

int cmd_run(const CommonOptions& options) {
    RunConfig config = resolve_config(options);
    RunResult result = run_pipeline(config);
    std::vector<std::string> written = write_run_artifacts(result, config);
    for (const auto& path : written) std::cout << "wrote " << path << '\n';
    std::cout << "balanced " << result.balance.original.total() << " -> "
              << result.balance.target * kStratumCount << " docs, split "
              << result.train_size << "/" << result.test_size << ", vocab "
              << result.vocab_size << '\n';
    for (const auto& mr : result.models) {
        std::cout << mr.name << ": accuracy "
                  << fairsent::detail::format_fixed(
                         mr.performance.overall.accuracy)
                  << " (en "
                  << fairsent::detail::format_fixed(
                         mr.performance.english.accuracy)
                  << ", fr "
                  << fairsent::detail::format_fixed(
                         mr.performance.french.accuracy)
                  << ")\n";
    }
    return 0;
}

int cmd_tune(const CommonOptions& options, const TuneOptions& tune) {
    RunConfig config = resolve_config(options);
    TuneResult result = tune_pipeline(config, tune);
    std::vector<std::string> written =
        write_tune_artifacts(result, config, tune);
    for (const auto& path : written) std::cout << "wrote " << path << '\n';
    for (const auto& [name, search] : result.by_model) {
        std::cout << name << " best:";
        for (const auto& [param, value] : search.best.params)
            std::cout << ' ' << param << '='
                      << fairsent::detail::format_double(value);
        std::cout << " mean_accuracy="
                  << fairsent::detail::format_fixed(
                         search.best.mean_accuracy)
                  << '\n';
    }
    return 0;
}

int cmd_report(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw IoError("not a directory: " + dir);
    std::vector<fs::path> kv_files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".kv") kv_files.push_back(entry.path());
    std::sort(kv_files.begin(), kv_files.end());

    bool rendered = false;
    for (const auto& path : kv_files) {
        std::string name = path.filename().string();
        KvMap kv = read_kv(path.string());
        if (name.rfind("performance_", 0) == 0) {
            std::cout << performance_text(performance_from_kv(kv),
                                          meta_from_kv(kv))
                      << '\n';
            rendered = true;
        } else if (name.rfind("fairness_", 0) == 0) {
            std::cout << fairness_text(fairness_from_kv(kv), meta_from_kv(kv))
                      << '\n';
            rendered = true;
        }
    }
    if (!rendered)
        throw IoError("no performance_*.kv or fairness_*.kv files in " + dir);
    return 0;
}

}

int main(int argc, char** argv) {
    CLI::App app{"bilingual sentiment pipeline and bias audit tool"};
    app.set_version_flag("--version", std::string(fairsent::kVersion));
    app.require_subcommand(1);

    auto* inspect = app.add_subcommand(
        "inspect", "parse corpora and print document/label/subgroup counts");
    std::vector<std::string> inspect_en, inspect_fr;
    std::string inspect_domain = "data";
    inspect->add_option("--en", inspect_en,
                        "English .processed file (repeatable)");
    inspect->add_option("--fr", inspect_fr,
                        "French .processed file (repeatable)");
    inspect->add_option("--domain", inspect_domain, "domain name");

    auto* balance_cmd = app.add_subcommand(
        "balance", "apply the minimum-subgroup rule and report the result");
    CommonOptions balance_options;
    add_common_options(balance_cmd, balance_options);

    auto* run = app.add_subcommand("run", "run the pipeline end to end");
    CommonOptions run_options;
    add_common_options(run, run_options);

    auto* tune =
        app.add_subcommand("tune", "cross-validated hyperparameter search");
    CommonOptions tune_options;
    add_common_options(tune, tune_options);
    fairsent::TuneOptions tune_settings;
    std::vector<double> grid_values;
    tune->add_option("--trials", tune_settings.trials,
                     "random-search trial count");
    tune->add_option("--k", tune_settings.k, "cross-validation folds");
    auto* grid_opt = tune->add_option(
        "--grid", grid_values,
        "exhaustive search over these values instead of random sampling");

    auto* report = app.add_subcommand(
        "report", "re-render a run's machine-readable outputs as tables");
    std::string report_dir;
    report->add_option("dir", report_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) {
            if (inspect_en.empty() && inspect_fr.empty()) {
                std::cerr << "fairsent: inspect needs --en or --fr files\n";
                return 2;
            }
            return cmd_inspect(inspect_en, inspect_fr, inspect_domain);
        }
        if (balance_cmd->parsed()) return cmd_balance(balance_options);
        if (run->parsed()) return cmd_run(run_options);
        if (tune->parsed()) {
            tune_settings.grid = grid_opt->count() > 0;
            tune_settings.grid_values = grid_values;
            return cmd_tune(tune_options, tune_settings);
        }
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const fairsent::Error& e) {
        std::cerr << "fairsent: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
