#pragma once

// Term normalization: lowercasing, per-language stopword removal, minimum
// term length, and an ordered list of caller-supplied keep-predicates. The
// predicate hook is the seam where heavier normalization (lemmatization,
// entity filtering) would plug in; there are no default entries.

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fairsent/corpus.hpp"
#include "fairsent/errors.hpp"

namespace fairsent {

// Lowercases ASCII plus the Latin-1 letters reachable in UTF-8 (À..Þ → à..þ,
// skipping ×) and the two OE/Y ligature cases used in French. All other
// bytes pass through verbatim.
inline std::string lowercase_utf8(std::string_view term) {
    std::string out;
    out.reserve(term.size());
    for (std::size_t i = 0; i < term.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(term[i]);
        if (c >= 'A' && c <= 'Z') {
            out.push_back(static_cast<char>(c + 0x20));
        } else if (c == 0xC3 && i + 1 < term.size()) {
            unsigned char d = static_cast<unsigned char>(term[i + 1]);
            if (d >= 0x80 && d <= 0x9E && d != 0x97) {
                out.push_back(static_cast<char>(0xC3));
                out.push_back(static_cast<char>(d + 0x20));
            } else {
                out.push_back(static_cast<char>(c));
                out.push_back(static_cast<char>(d));
            }
            ++i;
        } else if (c == 0xC5 && i + 1 < term.size()) {
            unsigned char d = static_cast<unsigned char>(term[i + 1]);
            if (d == 0x92) {  // Œ → œ
                out.push_back(static_cast<char>(0xC5));
                out.push_back(static_cast<char>(0x93));
            } else if (d == 0xB8) {  // Ÿ → ÿ
                out.push_back(static_cast<char>(0xC3));
                out.push_back(static_cast<char>(0xBF));
            } else {
                out.push_back(static_cast<char>(c));
                out.push_back(static_cast<char>(d));
            }
            ++i;
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

// Code points, not bytes: continuation bytes (10xxxxxx) do not count.
inline std::size_t codepoint_length(std::string_view term) {
    std::size_t n = 0;
    for (char c : term)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

struct TermFilter {
    std::string name;
    // Returns true to keep the term.
    std::function<bool(const std::string&)> keep;
};

struct PreprocessConfig {
    bool lowercase = true;
    // Entries must already be lowercase when lowercase=true, since matching
    // happens after case folding.
    std::map<Language, std::set<std::string>> stopword_lists;
    std::size_t min_term_length = 1;
    std::vector<TermFilter> extra_filters;
};

// One term per line, UTF-8; `#` starts a comment; blank lines ignored.
inline std::set<std::string> load_stopwords(const std::string& path,
                                            bool fold_case = true) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open stopword list " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t");
        std::string word = line.substr(begin, end - begin + 1);
        words.insert(fold_case ? lowercase_utf8(word) : word);
    }
    if (in.bad())
        throw IoError("read failure on " + path);
    return words;
}

inline Document preprocess_document(const Document& doc,
                                    const PreprocessConfig& config) {
    static const std::set<std::string> kNoStopwords;
    auto it = config.stopword_lists.find(doc.language);
    const auto& stopwords =
        it == config.stopword_lists.end() ? kNoStopwords : it->second;

    Document out;
    out.id = doc.id;
    out.label = doc.label;
    out.language = doc.language;
    out.domain = doc.domain;

    detail::TermAccumulator terms;
    for (const auto& tc : doc.terms) {
        std::string term =
            config.lowercase ? lowercase_utf8(tc.term) : tc.term;
        if (stopwords.count(term)) continue;
        if (codepoint_length(term) < config.min_term_length) continue;
        bool kept = true;
        for (const auto& filter : config.extra_filters) {
            if (!filter.keep(term)) {
                kept = false;
                break;
            }
        }
        if (!kept) continue;
        terms.add(term, tc.count);
    }
    out.terms = terms.take();
    return out;
}

// Pure; preserves document order and metadata. Documents whose term list
// empties out are retained so subgroup counts stay stable across configs.
inline Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config) {
    Corpus out;
    out.provenance = corpus.provenance;
    out.docs.reserve(corpus.docs.size());
    for (const auto& doc : corpus.docs)
        out.docs.push_back(preprocess_document(doc, config));
    return out;
}

}
