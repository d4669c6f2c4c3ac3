#pragma once

// TF-IDF vectorization. Plain formula semantics: tf = term count over the
// document's total count mass (out-of-vocabulary terms included in the
// denominator), idf = ln(N / df) with no smoothing, value = tf * idf, zeroes
// suppressed. No L2 row normalization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fairsent/corpus.hpp"
#include "fairsent/errors.hpp"
#include "fairsent/text.hpp"

namespace fairsent {

class Vocabulary {
public:
    Vocabulary() = default;

    // Terms are stored lexicographically (byte order); indices 0..V-1.
    explicit Vocabulary(std::vector<std::string> sorted_terms)
        : terms_(std::move(sorted_terms)) {
        index_.reserve(terms_.size());
        for (std::size_t i = 0; i < terms_.size(); ++i)
            index_.emplace(terms_[i], i);
    }

    std::size_t size() const { return terms_.size(); }

    // npos when the term is out of vocabulary.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const std::string& term) const {
        auto it = index_.find(term);
        return it == index_.end() ? npos : it->second;
    }

    const std::string& term_at(std::size_t i) const { return terms_[i]; }
    const std::vector<std::string>& terms() const { return terms_; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct SparseVector {
    std::vector<std::uint32_t> indices;  // strictly increasing
    std::vector<double> values;          // finite, nonzero

    std::size_t nnz() const { return indices.size(); }

    double squared_norm() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return s;
    }

    bool operator==(const SparseVector&) const = default;
};

inline double dot(const SparseVector& x, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.indices.size(); ++k)
        s += x.values[k] * w[x.indices[k]];
    return s;
}

struct TfIdfModel {
    Vocabulary vocabulary;
    std::vector<double> idf;
    std::vector<std::uint64_t> df;
    std::uint64_t document_count = 0;
};

inline TfIdfModel fit_tfidf(const Corpus& corpus) {
    if (corpus.empty())
        throw EmptyCorpusError();

    // df counts presence per document; term lists hold unique terms, but a
    // hand-built Document may repeat one, so track the last document seen.
    std::unordered_map<std::string, std::pair<std::uint64_t, std::size_t>> seen;
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        for (const auto& tc : corpus.docs[d].terms) {
            auto [it, inserted] = seen.try_emplace(tc.term, 1, d);
            if (!inserted && it->second.second != d) {
                it->second.first += 1;
                it->second.second = d;
            }
        }
    }

    std::vector<std::string> terms;
    terms.reserve(seen.size());
    for (const auto& [term, _] : seen) terms.push_back(term);
    std::sort(terms.begin(), terms.end());

    TfIdfModel model;
    model.document_count = corpus.docs.size();
    model.df.reserve(terms.size());
    model.idf.reserve(terms.size());
    for (const auto& term : terms) {
        std::uint64_t df = seen[term].first;
        model.df.push_back(df);
        model.idf.push_back(std::log(static_cast<double>(model.document_count) /
                                     static_cast<double>(df)));
    }
    model.vocabulary = Vocabulary(std::move(terms));
    return model;
}

inline SparseVector transform(const TfIdfModel& model, const Document& doc) {
    SparseVector vec;
    std::int64_t mass = doc.count_mass();
    if (mass == 0) return vec;

    std::vector<std::pair<std::uint32_t, double>> entries;
    for (const auto& tc : doc.terms) {
        std::size_t i = model.vocabulary.index_of(tc.term);
        if (i == Vocabulary::npos) continue;
        double tf = static_cast<double>(tc.count) / static_cast<double>(mass);
        double value = tf * model.idf[i];
        if (value == 0.0) continue;
        entries.emplace_back(static_cast<std::uint32_t>(i), value);
    }
    std::sort(entries.begin(), entries.end());
    vec.indices.reserve(entries.size());
    vec.values.reserve(entries.size());
    for (auto [i, v] : entries) {
        vec.indices.push_back(i);
        vec.values.push_back(v);
    }
    return vec;
}

struct TransformedCorpus {
    std::vector<SparseVector> matrix;
    std::vector<Sentiment> labels;
    std::vector<Language> groups;
};

inline TransformedCorpus transform_corpus(const TfIdfModel& model,
                                          const Corpus& corpus) {
    TransformedCorpus out;
    out.matrix.reserve(corpus.docs.size());
    out.labels.reserve(corpus.docs.size());
    out.groups.reserve(corpus.docs.size());
    for (const auto& doc : corpus.docs) {
        out.matrix.push_back(transform(model, doc));
        out.labels.push_back(doc.label);
        out.groups.push_back(doc.language);
    }
    return out;
}

inline constexpr std::string_view kTfIdfFormatVersion = "tfidf v1";

inline void save_tfidf(const TfIdfModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << kTfIdfFormatVersion << '\n';
    out << "log_base\te\n";
    out << "document_count\t" << model.document_count << '\n';
    out << "terms\t" << model.vocabulary.size() << '\n';
    for (std::size_t i = 0; i < model.vocabulary.size(); ++i) {
        out << model.vocabulary.term_at(i) << '\t' << model.df[i] << '\t'
            << detail::format_double(model.idf[i]) << '\n';
    }
    if (!out)
        throw IoError("write failure on " + path);
}

inline TfIdfModel load_tfidf(const std::string& path) {
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
    if (next_line() != kTfIdfFormatVersion)
        throw Error(path + ": not a tfidf v1 model file");
    auto field = [&](std::string_view key) -> std::string {
        next_line();
        auto tab = line.find('\t');
        if (tab == std::string::npos || std::string_view(line).substr(0, tab) != key)
            throw Error(path + ": expected header field '" + std::string(key) + "'");
        return line.substr(tab + 1);
    };
    if (field("log_base") != "e")
        throw Error(path + ": unsupported log base");
    TfIdfModel model;
    model.document_count = detail::parse_u64(field("document_count"));
    std::uint64_t term_count = detail::parse_u64(field("terms"));
    std::vector<std::string> terms;
    terms.reserve(term_count);
    for (std::uint64_t i = 0; i < term_count; ++i) {
        next_line();
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw Error(path + ": malformed term line");
        terms.push_back(line.substr(0, t1));
        model.df.push_back(detail::parse_u64(
            std::string_view(line).substr(t1 + 1, t2 - t1 - 1)));
        model.idf.push_back(
            detail::parse_double(std::string_view(line).substr(t2 + 1)));
    }
    model.vocabulary = Vocabulary(std::move(terms));
    return model;
}

}
