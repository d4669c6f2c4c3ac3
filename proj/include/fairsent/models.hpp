#pragma once

// The two classifiers. Multinomial Naive Bayes with additive smoothing,
// using the real-valued extension (feature mass in place of counts) so
// tf-idf inputs are valid; all probability work happens in log space.
// Linear SVM with L1 hinge loss, trained by dual coordinate descent with
// the bias folded in as a unit feature (so the bias is regularized too);
// convergence is certified by the maximal projected-gradient violation.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fairsent/corpus.hpp"
#include "fairsent/errors.hpp"
#include "fairsent/features.hpp"
#include "fairsent/rng.hpp"
#include "fairsent/text.hpp"

namespace fairsent {

inline constexpr std::size_t class_index(Sentiment s) {
    return static_cast<std::size_t>(s);
}
inline constexpr std::array<Sentiment, 2> kClasses = {Sentiment::Negative,
                                                      Sentiment::Positive};

namespace detail {

inline void check_aligned(std::size_t rows, std::size_t labels) {
    if (rows != labels)
        throw ConfigError("matrix rows and labels differ in length");
    if (rows == 0)
        throw EmptyCorpusError();
}

inline void check_both_classes(const std::vector<Sentiment>& labels) {
    bool has_neg = false, has_pos = false;
    for (Sentiment s : labels)
        (s == Sentiment::Negative ? has_neg : has_pos) = true;
    if (!has_neg || !has_pos)
        throw SingleClassError();
}

inline void check_indices(const SparseVector& x, std::size_t vocab_size) {
    for (std::uint32_t i : x.indices)
        if (i >= vocab_size)
            throw IndexOutOfVocabularyError(i, vocab_size);
}

}

struct NbModel {
    double alpha = 1.0;
    std::array<double, 2> log_prior{};                 // [negative, positive]
    std::array<std::vector<double>, 2> log_likelihood;

    std::size_t feature_count() const { return log_likelihood[0].size(); }
};

inline NbModel nb_fit(const std::vector<SparseVector>& matrix,
                      const std::vector<Sentiment>& labels, double alpha,
                      std::size_t vocab_size) {
    detail::check_aligned(matrix.size(), labels.size());
    detail::check_both_classes(labels);
    if (!(alpha > 0.0))
        throw ConfigError("alpha must be positive");

    NbModel model;
    model.alpha = alpha;
    std::array<std::vector<double>, 2> mass;
    mass[0].assign(vocab_size, 0.0);
    mass[1].assign(vocab_size, 0.0);
    std::array<std::size_t, 2> counts{};
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        detail::check_indices(matrix[r], vocab_size);
        std::size_t c = class_index(labels[r]);
        counts[c] += 1;
        const auto& x = matrix[r];
        for (std::size_t k = 0; k < x.indices.size(); ++k) {
            if (x.values[k] < 0.0)
                throw NegativeFeatureError();
            mass[c][x.indices[k]] += x.values[k];
        }
    }

    double n = static_cast<double>(matrix.size());
    for (std::size_t c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(counts[c]) / n);
        double total = std::accumulate(mass[c].begin(), mass[c].end(), 0.0);
        double denom = total + alpha * static_cast<double>(vocab_size);
        model.log_likelihood[c].reserve(vocab_size);
        for (std::size_t i = 0; i < vocab_size; ++i)
            model.log_likelihood[c].push_back(
                std::log((mass[c][i] + alpha) / denom));
    }
    return model;
}

struct NbScores {
    std::array<double, 2> log_score{};
};

inline std::pair<Sentiment, NbScores> nb_predict(const NbModel& model,
                                                 const SparseVector& x) {
    detail::check_indices(x, model.feature_count());
    NbScores scores;
    for (std::size_t c = 0; c < 2; ++c) {
        double s = model.log_prior[c];
        for (std::size_t k = 0; k < x.indices.size(); ++k)
            s += x.values[k] * model.log_likelihood[c][x.indices[k]];
        scores.log_score[c] = s;
    }
    Sentiment label = scores.log_score[class_index(Sentiment::Positive)] >
                              scores.log_score[class_index(Sentiment::Negative)]
                          ? Sentiment::Positive
                          : Sentiment::Negative;  // ties go negative
    return {label, scores};
}

struct TrainOptions {
    double tolerance = 1e-4;
    std::size_t max_iterations = 1000;  // epochs over the training set
    std::uint64_t seed = 0;
};

struct TrainingMeta {
    std::size_t epochs = 0;
    bool converged = false;
    double final_objective = 0.0;  // primal, bias term regularized
    double final_dual = 0.0;
    double max_projected_gradient = 0.0;
    std::vector<double> dual_by_epoch;
};

struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    double c_param = 1.0;
    TrainingMeta meta;
};

inline double svm_decision(const SvmModel& model, const SparseVector& x) {
    detail::check_indices(x, model.weights.size());
    return dot(x, model.weights) + model.bias;
}

inline Sentiment svm_predict(const SvmModel& model, const SparseVector& x) {
    return svm_decision(model, x) > 0.0 ? Sentiment::Positive
                                        : Sentiment::Negative;
}

// (1/2)(|w|^2 + b^2) + C * sum hinge. The b^2 term comes from the unit
// feature that folds the bias into the weight vector.
inline double svm_objective(const SvmModel& model,
                            const std::vector<SparseVector>& matrix,
                            const std::vector<Sentiment>& labels) {
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    reg = 0.5 * (reg + model.bias * model.bias);
    double hinge = 0.0;
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        double y = labels[r] == Sentiment::Positive ? 1.0 : -1.0;
        double margin = 1.0 - y * (dot(matrix[r], model.weights) + model.bias);
        if (margin > 0.0) hinge += margin;
    }
    return reg + model.c_param * hinge;
}

inline SvmModel svm_fit(const std::vector<SparseVector>& matrix,
                        const std::vector<Sentiment>& labels, double c_param,
                        const TrainOptions& options, std::size_t vocab_size) {
    detail::check_aligned(matrix.size(), labels.size());
    detail::check_both_classes(labels);
    if (!(c_param > 0.0))
        throw ConfigError("c must be positive");
    if (!(options.tolerance > 0.0))
        throw ConfigError("tolerance must be positive");

    const std::size_t n = matrix.size();
    std::vector<double> y(n);
    std::vector<double> q_diag(n);  // |x_j|^2 + 1 for the bias feature
    for (std::size_t j = 0; j < n; ++j) {
        detail::check_indices(matrix[j], vocab_size);
        y[j] = labels[j] == Sentiment::Positive ? 1.0 : -1.0;
        q_diag[j] = matrix[j].squared_norm() + 1.0;
    }

    SvmModel model;
    model.c_param = c_param;
    model.weights.assign(vocab_size, 0.0);
    std::vector<double> alpha(n, 0.0);
    double alpha_sum = 0.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    double max_pg = 0.0;
    std::size_t epoch = 0;
    for (; epoch < options.max_iterations; ++epoch) {
        SplitMix64 rng(derive_seed(options.seed, Stream::SvmOrder, epoch));
        shuffle(order, rng);
        max_pg = 0.0;
        for (std::size_t j : order) {
            const SparseVector& x = matrix[j];
            double g = y[j] * (dot(x, model.weights) + model.bias) - 1.0;
            double pg = g;
            if (alpha[j] == 0.0)
                pg = std::min(g, 0.0);
            else if (alpha[j] == c_param)
                pg = std::max(g, 0.0);
            max_pg = std::max(max_pg, std::fabs(pg));
            if (pg == 0.0) continue;
            double next =
                std::min(std::max(alpha[j] - g / q_diag[j], 0.0), c_param);
            double delta = next - alpha[j];
            if (delta == 0.0) continue;
            alpha[j] = next;
            alpha_sum += delta;
            double step = delta * y[j];
            for (std::size_t k = 0; k < x.indices.size(); ++k)
                model.weights[x.indices[k]] += step * x.values[k];
            model.bias += step;
        }
        double w_norm2 = model.bias * model.bias;
        for (double w : model.weights) w_norm2 += w * w;
        model.meta.dual_by_epoch.push_back(alpha_sum - 0.5 * w_norm2);
        if (max_pg < options.tolerance) {
            ++epoch;
            break;
        }
    }

    model.meta.epochs = epoch;
    model.meta.converged = max_pg < options.tolerance;
    model.meta.max_projected_gradient = max_pg;
    model.meta.final_dual =
        model.meta.dual_by_epoch.empty() ? 0.0 : model.meta.dual_by_epoch.back();
    model.meta.final_objective = svm_objective(model, matrix, labels);
    return model;
}

inline constexpr std::string_view kNbFormatVersion = "nb v1";
inline constexpr std::string_view kSvmFormatVersion = "svm v1";

inline void save_nb(const NbModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << kNbFormatVersion << '\n';
    out << "alpha\t" << detail::format_double(model.alpha) << '\n';
    out << "features\t" << model.feature_count() << '\n';
    out << "classes\tnegative positive\n";
    for (Sentiment c : kClasses)
        out << "prior\t" << to_string(c) << '\t'
            << detail::format_double(model.log_prior[class_index(c)]) << '\n';
    for (Sentiment c : kClasses) {
        out << "likelihood\t" << to_string(c);
        for (double v : model.log_likelihood[class_index(c)])
            out << ' ' << detail::format_double(v);
        out << '\n';
    }
    if (!out)
        throw IoError("write failure on " + path);
}

inline NbModel load_nb(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw Error(path + ": truncated model file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next_line() != kNbFormatVersion)
        throw Error(path + ": not an nb v1 model file");
    auto field = [&](std::string_view key) -> std::string {
        next_line();
        auto tab = line.find('\t');
        if (tab == std::string::npos ||
            std::string_view(line).substr(0, tab) != key)
            throw Error(path + ": expected header field '" + std::string(key) +
                        "'");
        return line.substr(tab + 1);
    };
    NbModel model;
    model.alpha = detail::parse_double(field("alpha"));
    std::uint64_t features = detail::parse_u64(field("features"));
    if (field("classes") != "negative positive")
        throw Error(path + ": unsupported class list");
    for (Sentiment c : kClasses) {
        std::string value = field("prior");
        auto tab = value.find('\t');
        if (tab == std::string::npos ||
            value.substr(0, tab) != to_string(c))
            throw Error(path + ": prior lines out of order");
        model.log_prior[class_index(c)] =
            detail::parse_double(std::string_view(value).substr(tab + 1));
    }
    for (Sentiment c : kClasses) {
        std::string value = field("likelihood");
        std::istringstream row(value);
        std::string name, token;
        std::getline(row, name, ' ');
        if (name != to_string(c))
            throw Error(path + ": likelihood lines out of order");
        auto& ll = model.log_likelihood[class_index(c)];
        ll.reserve(features);
        while (std::getline(row, token, ' '))
            ll.push_back(detail::parse_double(token));
        if (ll.size() != features)
            throw Error(path + ": likelihood length mismatch");
    }
    return model;
}

inline void save_svm(const SvmModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << kSvmFormatVersion << '\n';
    out << "c\t" << detail::format_double(model.c_param) << '\n';
    out << "bias\t" << detail::format_double(model.bias) << '\n';
    out << "features\t" << model.weights.size() << '\n';
    out << "epochs\t" << model.meta.epochs << '\n';
    out << "converged\t" << (model.meta.converged ? "true" : "false") << '\n';
    out << "objective\t" << detail::format_double(model.meta.final_objective)
        << '\n';
    for (std::size_t i = 0; i < model.weights.size(); ++i)
        if (model.weights[i] != 0.0)
            out << i << '\t' << detail::format_double(model.weights[i]) << '\n';
    if (!out)
        throw IoError("write failure on " + path);
}

inline SvmModel load_svm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line))
            throw Error(path + ": truncated model file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next_line() != kSvmFormatVersion)
        throw Error(path + ": not an svm v1 model file");
    auto field = [&](std::string_view key) -> std::string {
        next_line();
        auto tab = line.find('\t');
        if (tab == std::string::npos ||
            std::string_view(line).substr(0, tab) != key)
            throw Error(path + ": expected header field '" + std::string(key) +
                        "'");
        return line.substr(tab + 1);
    };
    SvmModel model;
    model.c_param = detail::parse_double(field("c"));
    model.bias = detail::parse_double(field("bias"));
    model.weights.assign(detail::parse_u64(field("features")), 0.0);
    model.meta.epochs = detail::parse_u64(field("epochs"));
    model.meta.converged = field("converged") == "true";
    model.meta.final_objective = detail::parse_double(field("objective"));
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(path + ": malformed weight line");
        std::uint64_t i =
            detail::parse_u64(std::string_view(line).substr(0, tab));
        if (i >= model.weights.size())
            throw Error(path + ": weight index out of range");
        model.weights[i] =
            detail::parse_double(std::string_view(line).substr(tab + 1));
    }
    return model;
}

}
