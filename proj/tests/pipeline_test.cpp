#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fairsent/pipeline.hpp"

namespace {

using namespace fairsent;
namespace fs = std::filesystem;

const std::string kFixtureDir = FAIRSENT_TEST_DATA_DIR "/fixture";
const std::string kStopwordDir = FAIRSENT_STOPWORD_DIR;

RunConfig fixture_config(const std::string& out_name) {
    RunConfig c;
    c.domain = "fixture";
    c.data_en = {kFixtureDir + "/en.processed"};
    c.data_fr = {kFixtureDir + "/fr.processed"};
    c.stopwords_en = kStopwordDir + "/english.txt";
    c.stopwords_fr = kStopwordDir + "/french.txt";
    c.seed = 42;
    c.out_dir = ::testing::TempDir() + out_name;
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in.good()) << path;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = ::testing::TempDir() + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

TEST(ParseEorVariantTokens, AcceptedAndRejected) {
    EXPECT_EQ(parse_eor_variant("paper"), EorVariant::Product);
    EXPECT_EQ(parse_eor_variant("product"), EorVariant::Product);
    EXPECT_EQ(parse_eor_variant("min"), EorVariant::MinComponent);
    EXPECT_EQ(parse_eor_variant("min-component"), EorVariant::MinComponent);
    EXPECT_THROW(parse_eor_variant("median"), ConfigError);
    EXPECT_THROW(parse_eor_variant(""), ConfigError);
}

TEST(ConfigFromKv, ReadsEveryField) {
    KvMap kv = parse_kv(
        "domain = music\n"
        "data.en = a.processed, b.processed\n"
        "data.fr = c.processed\n"
        "stopwords.en = sw_en.txt\n"
        "stopwords.fr = sw_fr.txt\n"
        "lowercase = false\n"
        "min_term_length = 2\n"
        "seed = 7\n"
        "train_fraction = 0.75\n"
        "model = svm\n"
        "alpha = 0.5\n"
        "c = 2\n"
        "tolerance = 0.001\n"
        "max_epochs = 50\n"
        "eor_variant = min\n"
        "out = results\n",
        "cfg");
    RunConfig c = config_from_kv(kv);
    EXPECT_EQ(c.domain, "music");
    EXPECT_EQ(c.data_en,
              (std::vector<std::string>{"a.processed", "b.processed"}));
    EXPECT_EQ(c.data_fr, (std::vector<std::string>{"c.processed"}));
    EXPECT_EQ(c.stopwords_en, "sw_en.txt");
    EXPECT_EQ(c.stopwords_fr, "sw_fr.txt");
    EXPECT_FALSE(c.lowercase);
    EXPECT_EQ(c.min_term_length, 2u);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_DOUBLE_EQ(c.train_fraction, 0.75);
    EXPECT_EQ(c.model, "svm");
    EXPECT_DOUBLE_EQ(c.alpha, 0.5);
    EXPECT_DOUBLE_EQ(c.c_param, 2.0);
    EXPECT_DOUBLE_EQ(c.tolerance, 0.001);
    EXPECT_EQ(c.max_epochs, 50u);
    EXPECT_EQ(c.eor_variant, EorVariant::MinComponent);
    EXPECT_EQ(c.out_dir, "results");
}

TEST(ConfigFromKv, EmptyInputKeepsTheBase) {
    RunConfig base = fixture_config("cfg_base");
    base.model = "nb";
    base.alpha = 0.25;
    RunConfig c = config_from_kv(parse_kv("", "empty"), base);
    EXPECT_EQ(c.data_en, base.data_en);
    EXPECT_EQ(c.model, "nb");
    EXPECT_DOUBLE_EQ(c.alpha, 0.25);
    EXPECT_EQ(c.out_dir, base.out_dir);
}

TEST(ValidateConfig, RejectsBrokenSettings) {
    RunConfig ok = fixture_config("cfg_validate");

    RunConfig bad_model = ok;
    bad_model.model = "forest";
    EXPECT_THROW(validate_config(bad_model), ConfigError);

    RunConfig bad_fraction = ok;
    bad_fraction.train_fraction = 1.0;
    EXPECT_THROW(validate_config(bad_fraction), ConfigError);
    bad_fraction.train_fraction = 0.0;
    EXPECT_THROW(validate_config(bad_fraction), ConfigError);

    RunConfig no_data = ok;
    no_data.data_fr.clear();
    EXPECT_THROW(validate_config(no_data), ConfigError);

    RunConfig missing_file = ok;
    missing_file.data_en = {kFixtureDir + "/absent.processed"};
    EXPECT_THROW(validate_config(missing_file), ConfigError);

    RunConfig missing_stopwords = ok;
    missing_stopwords.stopwords_fr = kStopwordDir + "/absent.txt";
    EXPECT_THROW(validate_config(missing_stopwords), ConfigError);

    EXPECT_NO_THROW(validate_config(ok));
}

TEST(RequestedModels, ExpandsBoth) {
    RunConfig c;
    c.model = "both";
    EXPECT_EQ(requested_models(c), (std::vector<std::string>{"nb", "svm"}));
    c.model = "svm";
    EXPECT_EQ(requested_models(c), (std::vector<std::string>{"svm"}));
}

TEST(RunPipeline, FixtureEndToEnd) {
    RunResult r = run_pipeline(fixture_config("run_e2e"));

    EXPECT_EQ(r.loaded_counts.n[0], 130u);
    EXPECT_EQ(r.loaded_counts.n[1], 120u);
    EXPECT_EQ(r.loaded_counts.n[2], 110u);
    EXPECT_EQ(r.loaded_counts.n[3], 100u);
    EXPECT_EQ(r.balance.target, 100u);
    EXPECT_EQ(r.train_size, 320u);
    EXPECT_EQ(r.test_size, 80u);
    EXPECT_GT(r.vocab_size, 0u);

    ASSERT_EQ(r.models.size(), 2u);
    EXPECT_EQ(r.models[0].name, "nb");
    EXPECT_EQ(r.models[1].name, "svm");
    for (const ModelRunResult& m : r.models) {
        EXPECT_EQ(m.performance.overall.n, 80u);
        EXPECT_EQ(m.performance.english.n, 40u);
        EXPECT_EQ(m.performance.french.n, 40u);
        EXPECT_GE(m.fairness.dpr, 0.0);
        EXPECT_LE(m.fairness.dpr, 1.0);
    }
}

TEST(RunPipeline, SingleModelSelection) {
    RunConfig c = fixture_config("run_single");
    c.model = "nb";
    RunResult r = run_pipeline(c);
    ASSERT_EQ(r.models.size(), 1u);
    EXPECT_EQ(r.models[0].name, "nb");
}

TEST(RunPipeline, StageErrorsNameTheStage) {
    RunConfig c = fixture_config("run_badfile");
    c.data_en = {write_temp("malformed.processed", "word 42\n")};
    try {
        run_pipeline(c);
        FAIL() << "expected a load failure";
    } catch (const Error& e) {
        EXPECT_EQ(std::string(e.what()).rfind("load: ", 0), 0u) << e.what();
    }
}

TEST(RunArtifacts, WritesTheFullSetOnce) {
    RunConfig c = fixture_config("artifacts_a");
    RunResult r = run_pipeline(c);
    std::vector<std::string> written = write_run_artifacts(r, c);

    ASSERT_EQ(written.size(), 11u);
    std::vector<std::string> names;
    for (const std::string& path : written) {
        EXPECT_TRUE(fs::exists(path)) << path;
        names.push_back(fs::path(path).filename().string());
    }
    EXPECT_EQ(names,
              (std::vector<std::string>{
                  "resolved_config.kv", "balance.kv", "performance_nb.txt",
                  "performance_nb.kv", "fairness_nb.txt", "fairness_nb.kv",
                  "performance_svm.txt", "performance_svm.kv",
                  "fairness_svm.txt", "fairness_svm.kv", "summary.csv"}));

    SlicedReports nb =
        performance_from_kv(read_kv(c.out_dir + "/performance_nb.kv"));
    EXPECT_EQ(nb.overall.n, 80u);
    EXPECT_EQ(nb.english.n + nb.french.n, 80u);

    std::string summary = slurp(c.out_dir + "/summary.csv");
    EXPECT_EQ(summary.rfind(std::string(kSummaryHeader) + "\n", 0), 0u);
    EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 3);
    EXPECT_NE(summary.find("fixture,nb,42,"), std::string::npos);
    EXPECT_NE(summary.find("fixture,svm,42,"), std::string::npos);
}

TEST(RunArtifacts, RepeatRunsAreByteIdentical) {
    RunConfig a = fixture_config("repeat_a");
    RunConfig b = fixture_config("repeat_b");
    std::vector<std::string> wa = write_run_artifacts(run_pipeline(a), a);
    std::vector<std::string> wb = write_run_artifacts(run_pipeline(b), b);
    ASSERT_EQ(wa.size(), wb.size());
    for (std::size_t i = 0; i < wa.size(); ++i) {
        if (fs::path(wa[i]).filename() == "resolved_config.kv")
            continue;  // differs in the out path, by construction
        EXPECT_EQ(slurp(wa[i]), slurp(wb[i]))
            << fs::path(wa[i]).filename().string();
    }
}

TEST(ResolvedConfig, RoundTripsThroughKv) {
    RunConfig c = fixture_config("resolved");
    c.model = "nb";
    c.alpha = 0.5;
    c.min_term_length = 2;
    c.eor_variant = EorVariant::MinComponent;
    c.train_fraction = 0.75;

    RunConfig back = config_from_kv(parse_kv(resolved_config_kv(c), "rc"));
    EXPECT_EQ(back.domain, c.domain);
    EXPECT_EQ(back.data_en, c.data_en);
    EXPECT_EQ(back.data_fr, c.data_fr);
    EXPECT_EQ(back.stopwords_en, c.stopwords_en);
    EXPECT_EQ(back.stopwords_fr, c.stopwords_fr);
    EXPECT_EQ(back.lowercase, c.lowercase);
    EXPECT_EQ(back.min_term_length, c.min_term_length);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_DOUBLE_EQ(back.train_fraction, c.train_fraction);
    EXPECT_EQ(back.model, c.model);
    EXPECT_DOUBLE_EQ(back.alpha, c.alpha);
    EXPECT_DOUBLE_EQ(back.c_param, c.c_param);
    EXPECT_DOUBLE_EQ(back.tolerance, c.tolerance);
    EXPECT_EQ(back.max_epochs, c.max_epochs);
    EXPECT_EQ(back.eor_variant, c.eor_variant);
    EXPECT_EQ(back.out_dir, c.out_dir);
}

TEST(TunePipeline, RandomSearchOverTheFixture) {
    RunConfig c = fixture_config("tune_nb");
    c.model = "nb";
    TuneOptions options;
    options.trials = 3;
    options.k = 3;
    TuneResult r = tune_pipeline(c, options);

    ASSERT_EQ(r.by_model.size(), 1u);
    const SearchResult& search = r.by_model.at("nb");
    EXPECT_EQ(search.log.size(), 3u);
    EXPECT_EQ(search.folds.size(), 3u);
    EXPECT_FALSE(search.best.fold_accuracy.empty());
    EXPECT_TRUE(r.spaces.at("nb").params.count("alpha"));
}

TEST(TuneArtifacts, BestParamsFeedARunConfig) {
    RunConfig c = fixture_config("tune_artifacts");
    c.model = "nb";
    TuneOptions options;
    options.trials = 2;
    options.k = 3;
    TuneResult r = tune_pipeline(c, options);
    std::vector<std::string> written = write_tune_artifacts(r, c, options);

    ASSERT_EQ(written.size(), 2u);
    EXPECT_EQ(fs::path(written[0]).filename().string(), "search_log_nb.csv");
    EXPECT_EQ(fs::path(written[1]).filename().string(), "best_params.kv");

    std::string log = slurp(written[0]);
    EXPECT_EQ(log.rfind("# space: alpha log-uniform [0.001, 10]\n", 0), 0u);
    EXPECT_NE(log.find("trial,alpha,fold_0,fold_1,fold_2,mean,status"),
              std::string::npos);

    KvMap best = read_kv(written[1]);
    EXPECT_TRUE(best.has("alpha"));
    EXPECT_TRUE(best.has("tune.nb.mean_accuracy"));
    RunConfig tuned = config_from_kv(best, c);
    EXPECT_EQ(tuned.alpha, r.by_model.at("nb").best.params.at("alpha"));
}

TEST(TunePipeline, GridModeUsesTheGivenValues) {
    RunConfig c = fixture_config("tune_grid");
    c.model = "nb";
    TuneOptions options;
    options.grid = true;
    options.grid_values = {0.5, 1.0};
    options.k = 3;
    TuneResult r = tune_pipeline(c, options);
    const SearchResult& search = r.by_model.at("nb");
    ASSERT_EQ(search.log.size(), 2u);
    EXPECT_DOUBLE_EQ(search.log[0].params.at("alpha"), 0.5);
    EXPECT_DOUBLE_EQ(search.log[1].params.at("alpha"), 1.0);

    TuneOptions empty_grid;
    empty_grid.grid = true;
    EXPECT_THROW(tune_pipeline(c, empty_grid), ConfigError);
}

}
