#pragma once

// Cross-validated hyperparameter search. Random search draws each trial's
// parameters from seeded uniform / log-uniform / choice ranges; grid search
// enumerates the Cartesian product of choice sets. The fold split is
// computed once per search so trials stay comparable, and per-fold fit
// seeds do not depend on the trial index: a degenerate one-point space
// yields identical fold accuracies on every trial.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "fairsent/errors.hpp"
#include "fairsent/features.hpp"
#include "fairsent/models.hpp"
#include "fairsent/rng.hpp"
#include "fairsent/text.hpp"

namespace fairsent {

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

inline std::vector<Fold> kfold_indices(std::size_t n, std::size_t k,
                                       std::uint64_t seed) {
    if (k < 2)
        throw ConfigError("k must be at least 2");
    if (k > n)
        throw KTooLargeError(k, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(derive_seed(seed, Stream::Folds));
    shuffle(order, rng);

    std::vector<Fold> folds(k);
    std::size_t base = n / k, rest = n % k, pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        std::size_t take = base + (f < rest ? 1 : 0);
        for (std::size_t i = 0; i < take; ++i)
            folds[f].validation.push_back(order[pos++]);
    }
    for (std::size_t f = 0; f < k; ++f)
        for (std::size_t g = 0; g < k; ++g)
            if (g != f)
                folds[f].train.insert(folds[f].train.end(),
                                      folds[g].validation.begin(),
                                      folds[g].validation.end());
    return folds;
}

struct LogUniform {
    double lo, hi;
};
struct Uniform {
    double lo, hi;
};
struct Choice {
    std::vector<double> values;
};
using ParamRange = std::variant<LogUniform, Uniform, Choice>;

struct SearchSpace {
    // Ordered by name so sampling order is deterministic.
    std::map<std::string, ParamRange> params;
};

inline void validate(const SearchSpace& space) {
    if (space.params.empty())
        throw ConfigError("search space is empty");
    for (const auto& [name, range] : space.params) {
        if (const auto* lu = std::get_if<LogUniform>(&range)) {
            if (!(lu->lo > 0.0) || !(lu->hi >= lu->lo))
                throw ConfigError("log-uniform bounds for '" + name +
                                  "' must satisfy 0 < lo <= hi");
        } else if (const auto* u = std::get_if<Uniform>(&range)) {
            if (!(u->hi >= u->lo))
                throw ConfigError("uniform bounds for '" + name +
                                  "' must satisfy lo <= hi");
        } else if (std::get<Choice>(range).values.empty()) {
            throw ConfigError("choice set for '" + name + "' is empty");
        }
    }
}

enum class ModelKind { Nb, Svm };

inline const char* to_string(ModelKind kind) {
    return kind == ModelKind::Nb ? "nb" : "svm";
}

inline SearchSpace default_space(ModelKind kind) {
    SearchSpace space;
    if (kind == ModelKind::Nb)
        space.params.emplace("alpha", LogUniform{1e-3, 1e1});
    else
        space.params.emplace("c", LogUniform{1e-3, 1e3});
    return space;
}

inline std::string describe(const ParamRange& range) {
    if (const auto* lu = std::get_if<LogUniform>(&range))
        return "log-uniform [" + detail::format_double(lu->lo) + ", " +
               detail::format_double(lu->hi) + "]";
    if (const auto* u = std::get_if<Uniform>(&range))
        return "uniform [" + detail::format_double(u->lo) + ", " +
               detail::format_double(u->hi) + "]";
    const auto& values = std::get<Choice>(range).values;
    std::string s = "choice {";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += detail::format_double(values[i]);
    }
    return s + "}";
}

struct TrialResult {
    std::size_t trial = 0;
    std::map<std::string, double> params;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    double wall_seconds = 0.0;  // in-memory only; never serialized
    bool failed = false;
    std::string error;
};

namespace detail {

inline std::map<std::string, double> sample_params(const SearchSpace& space,
                                                   SplitMix64& rng) {
    std::map<std::string, double> out;
    for (const auto& [name, range] : space.params) {
        if (const auto* lu = std::get_if<LogUniform>(&range)) {
            double u = rng.next_double();
            out[name] = std::exp(std::log(lu->lo) +
                                 u * (std::log(lu->hi) - std::log(lu->lo)));
        } else if (const auto* un = std::get_if<Uniform>(&range)) {
            out[name] = un->lo + rng.next_double() * (un->hi - un->lo);
        } else {
            const auto& values = std::get<Choice>(range).values;
            out[name] = values[rng.next_below(values.size())];
        }
    }
    return out;
}

inline double param_or(const std::map<std::string, double>& params,
                       const std::string& name, double fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

}

// Evaluates one parameter setting by k-fold CV accuracy. Folds and per-fold
// seeds are owned by the caller so every trial sees the same ones.
inline std::vector<double> evaluate_folds(
    const std::vector<SparseVector>& matrix,
    const std::vector<Sentiment>& labels, std::size_t vocab_size,
    ModelKind kind, const std::map<std::string, double>& params,
    const std::vector<Fold>& folds, std::uint64_t seed,
    const TrainOptions& svm_options) {
    std::vector<double> accuracy;
    accuracy.reserve(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<SparseVector> train_x;
        std::vector<Sentiment> train_y;
        train_x.reserve(folds[f].train.size());
        train_y.reserve(folds[f].train.size());
        for (std::size_t i : folds[f].train) {
            train_x.push_back(matrix[i]);
            train_y.push_back(labels[i]);
        }
        std::size_t correct = 0;
        if (kind == ModelKind::Nb) {
            double alpha = detail::param_or(params, "alpha", 1.0);
            NbModel model = nb_fit(train_x, train_y, alpha, vocab_size);
            for (std::size_t i : folds[f].validation)
                if (nb_predict(model, matrix[i]).first == labels[i]) ++correct;
        } else {
            double c = detail::param_or(params, "c", 1.0);
            TrainOptions options = svm_options;
            options.seed = derive_seed(seed, Stream::FoldFit, f);
            SvmModel model = svm_fit(train_x, train_y, c, options, vocab_size);
            for (std::size_t i : folds[f].validation)
                if (svm_predict(model, matrix[i]) == labels[i]) ++correct;
        }
        accuracy.push_back(static_cast<double>(correct) /
                           static_cast<double>(folds[f].validation.size()));
    }
    return accuracy;
}

struct SearchResult {
    TrialResult best;
    std::vector<TrialResult> log;
    std::vector<Fold> folds;
};

namespace detail {

inline TrialResult run_trial(const std::vector<SparseVector>& matrix,
                             const std::vector<Sentiment>& labels,
                             std::size_t vocab_size, ModelKind kind,
                             std::map<std::string, double> params,
                             std::size_t index, const std::vector<Fold>& folds,
                             std::uint64_t seed,
                             const TrainOptions& svm_options) {
    TrialResult trial;
    trial.trial = index;
    trial.params = std::move(params);
    auto start = std::chrono::steady_clock::now();
    try {
        trial.fold_accuracy = evaluate_folds(matrix, labels, vocab_size, kind,
                                             trial.params, folds, seed,
                                             svm_options);
        double sum = 0.0;
        for (double a : trial.fold_accuracy) sum += a;
        trial.mean_accuracy = sum / static_cast<double>(folds.size());
    } catch (const Error& e) {
        trial.failed = true;
        trial.error = e.what();
    }
    trial.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return trial;
}

inline TrialResult pick_best(const std::vector<TrialResult>& log) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < log.size(); ++i) {
        if (log[i].failed) continue;
        if (!best || log[i].mean_accuracy > log[*best].mean_accuracy)
            best = i;  // strict >, so ties keep the earlier trial
    }
    if (!best)
        throw Error("every search trial failed");
    return log[*best];
}

}

inline SearchResult run_search(const std::vector<SparseVector>& matrix,
                               const std::vector<Sentiment>& labels,
                               std::size_t vocab_size, ModelKind kind,
                               const SearchSpace& space, std::size_t trials,
                               std::size_t k, std::uint64_t seed,
                               const TrainOptions& svm_options = {}) {
    if (trials < 1)
        throw ConfigError("trials must be at least 1");
    validate(space);

    SearchResult result;
    result.folds = kfold_indices(matrix.size(), k, seed);
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(seed, Stream::SearchTrial, t));
        result.log.push_back(detail::run_trial(
            matrix, labels, vocab_size, kind,
            detail::sample_params(space, rng), t, result.folds, seed,
            svm_options));
    }
    result.best = detail::pick_best(result.log);
    return result;
}

// Exhaustive search over a space whose every range is a finite choice set.
inline SearchResult run_grid(const std::vector<SparseVector>& matrix,
                             const std::vector<Sentiment>& labels,
                             std::size_t vocab_size, ModelKind kind,
                             const SearchSpace& space, std::size_t k,
                             std::uint64_t seed,
                             const TrainOptions& svm_options = {}) {
    validate(space);
    for (const auto& [name, range] : space.params)
        if (!std::holds_alternative<Choice>(range))
            throw ConfigError("grid search requires a choice set for '" +
                              name + "'");

    std::vector<std::map<std::string, double>> grid{{}};
    for (const auto& [name, range] : space.params) {
        std::vector<std::map<std::string, double>> next;
        for (const auto& partial : grid)
            for (double v : std::get<Choice>(range).values) {
                auto point = partial;
                point[name] = v;
                next.push_back(std::move(point));
            }
        grid = std::move(next);
    }

    SearchResult result;
    result.folds = kfold_indices(matrix.size(), k, seed);
    for (std::size_t t = 0; t < grid.size(); ++t)
        result.log.push_back(detail::run_trial(matrix, labels, vocab_size,
                                               kind, std::move(grid[t]), t,
                                               result.folds, seed,
                                               svm_options));
    result.best = detail::pick_best(result.log);
    return result;
}

// CSV rows: trial, parameters, per-fold accuracies, mean, status. Header
// comments record the space so every log is self-describing. Wall time is
// deliberately absent: a fixed seed must give a byte-identical log.
inline void write_search_log(std::ostream& out, const SearchSpace& space,
                             const std::vector<TrialResult>& log,
                             std::size_t k) {
    for (const auto& [name, range] : space.params)
        out << "# space: " << name << ' ' << describe(range) << '\n';
    out << "trial";
    for (const auto& [name, _] : space.params) out << ',' << name;
    for (std::size_t f = 0; f < k; ++f) out << ",fold_" << f;
    out << ",mean,status\n";
    for (const TrialResult& trial : log) {
        out << trial.trial;
        for (const auto& [name, _] : space.params)
            out << ',' << detail::format_double(trial.params.at(name));
        if (trial.failed) {
            for (std::size_t f = 0; f < k; ++f) out << ',';
            out << ",,failed\n";
            continue;
        }
        for (double a : trial.fold_accuracy)
            out << ',' << detail::format_double(a);
        out << ',' << detail::format_double(trial.mean_accuracy) << ",ok\n";
    }
}

}
