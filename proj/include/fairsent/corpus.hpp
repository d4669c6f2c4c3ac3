#pragma once

// Bag-of-words review corpus: one review per line, whitespace-separated
// `token:count` pairs plus a `#label#:positive|negative` sentinel. Tokens may
// themselves contain colons (`..:2`, `12:30:1`), so each pair is split at its
// LAST colon. Text is UTF-8 and preserved verbatim.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fairsent/errors.hpp"

namespace fairsent {

enum class Sentiment : std::uint8_t { Negative = 0, Positive = 1 };
enum class Language : std::uint8_t { English = 0, French = 1 };

inline constexpr std::string_view kLabelSentinel = "#label#";
inline constexpr std::string_view kLangSentinel = "#lang#";
inline constexpr std::string_view kDomainSentinel = "#domain#";

inline const char* to_string(Sentiment s) {
    return s == Sentiment::Positive ? "positive" : "negative";
}

inline const char* to_string(Language l) {
    return l == Language::English ? "en" : "fr";
}

inline const char* display_name(Language l) {
    return l == Language::English ? "English" : "French";
}

struct TermCount {
    std::string term;
    std::int64_t count = 0;

    bool operator==(const TermCount&) const = default;
};

struct Document {
    std::string id;
    std::vector<TermCount> terms;
    Sentiment label = Sentiment::Negative;
    Language language = Language::English;
    std::string domain;

    std::int64_t count_mass() const {
        std::int64_t total = 0;
        for (const auto& tc : terms) total += tc.count;
        return total;
    }
};

struct Provenance {
    std::vector<std::string> sources;
    std::chrono::system_clock::time_point loaded_at{};
};

struct Corpus {
    std::vector<Document> docs;
    Provenance provenance;

    std::size_t size() const { return docs.size(); }
    bool empty() const { return docs.empty(); }
};

// Fixed stratum order used everywhere: En+, En-, Fr+, Fr-.
inline constexpr std::size_t kStratumCount = 4;

inline constexpr std::size_t stratum_index(Language l, Sentiment s) {
    return static_cast<std::size_t>(l) * 2 +
           (s == Sentiment::Positive ? 0 : 1);
}

inline constexpr std::size_t stratum_index(const Document& d) {
    return stratum_index(d.language, d.label);
}

inline const char* stratum_name(std::size_t stratum) {
    static constexpr const char* names[kStratumCount] = {
        "en/positive", "en/negative", "fr/positive", "fr/negative"};
    return names[stratum];
}

struct SubgroupCounts {
    std::array<std::uint64_t, kStratumCount> n{};

    std::uint64_t& at(Language l, Sentiment s) { return n[stratum_index(l, s)]; }
    std::uint64_t at(Language l, Sentiment s) const { return n[stratum_index(l, s)]; }

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (auto c : n) sum += c;
        return sum;
    }

    std::uint64_t min() const {
        std::uint64_t m = n[0];
        for (auto c : n) m = std::min(m, c);
        return m;
    }

    bool operator==(const SubgroupCounts&) const = default;
};

inline SubgroupCounts subgroup_counts(const Corpus& corpus) {
    SubgroupCounts counts;
    for (const auto& doc : corpus.docs) counts.n[stratum_index(doc)]++;
    return counts;
}

namespace detail {

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// Splits one `term:value` token at its last colon.
inline std::pair<std::string_view, std::string_view> split_pair(std::string_view token) {
    auto pos = token.rfind(':');
    if (pos == std::string_view::npos)
        throw ParseError(ParseError::Kind::MalformedPair,
                         "token '" + std::string(token) + "' has no colon");
    if (pos == 0)
        throw ParseError(ParseError::Kind::MalformedPair,
                         "token '" + std::string(token) + "' has an empty term");
    return {token.substr(0, pos), token.substr(pos + 1)};
}

inline std::int64_t parse_count(std::string_view term, std::string_view value) {
    std::uint64_t count = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc{} || ptr != last || count == 0)
        throw ParseError(ParseError::Kind::MalformedPair,
                         "count '" + std::string(value) + "' for term '" +
                             std::string(term) + "' is not a positive integer");
    return static_cast<std::int64_t>(count);
}

template <typename Fn>
void for_each_token(std::string_view line, Fn&& fn) {
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) fn(line.substr(start, i - start));
    }
}

// Accumulates terms in first-appearance order, merging duplicates by sum.
class TermAccumulator {
public:
    void add(std::string_view term, std::int64_t count) {
        auto it = index_.find(std::string(term));
        if (it == index_.end()) {
            index_.emplace(std::string(term), terms_.size());
            terms_.push_back({std::string(term), count});
        } else {
            terms_[it->second].count += count;
        }
    }

    std::vector<TermCount> take() { return std::move(terms_); }

private:
    std::vector<TermCount> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

}

struct ParsedLine {
    std::vector<TermCount> terms;
    Sentiment label = Sentiment::Negative;
};

inline Sentiment parse_sentiment(std::string_view value) {
    if (value == "positive") return Sentiment::Positive;
    if (value == "negative") return Sentiment::Negative;
    throw ParseError(ParseError::Kind::UnknownLabel,
                     "label value '" + std::string(value) + "'");
}

inline Language parse_language(std::string_view value) {
    if (value == "en" || value == "english") return Language::English;
    if (value == "fr" || value == "french") return Language::French;
    throw ParseError(ParseError::Kind::MalformedPair,
                     "language '" + std::string(value) + "'");
}

inline ParsedLine parse_line(std::string_view line) {
    ParsedLine out;
    detail::TermAccumulator terms;
    bool have_label = false;
    detail::for_each_token(line, [&](std::string_view token) {
        auto [term, value] = detail::split_pair(token);
        if (term == kLabelSentinel) {
            if (have_label)
                throw ParseError(ParseError::Kind::MalformedPair,
                                 "duplicate #label# pair");
            out.label = parse_sentiment(value);
            have_label = true;
            return;
        }
        terms.add(term, detail::parse_count(term, value));
    });
    if (!have_label)
        throw ParseError(ParseError::Kind::MissingLabel,
                         "line has no #label# pair");
    out.terms = terms.take();
    return out;
}

inline Corpus load_corpus(const std::string& path, Language language,
                          const std::string& domain) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    Corpus corpus;
    corpus.provenance.sources.push_back(path);
    corpus.provenance.loaded_at = std::chrono::system_clock::now();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 &&
            line.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line.erase(0, 3);  // UTF-8 BOM
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!detail::is_space(c)) { blank = false; break; }
        if (blank) continue;
        try {
            ParsedLine parsed = parse_line(line);
            Document doc;
            doc.id = path + ":" + std::to_string(line_no);
            doc.terms = std::move(parsed.terms);
            doc.label = parsed.label;
            doc.language = language;
            doc.domain = domain;
            corpus.docs.push_back(std::move(doc));
        } catch (const ParseError& e) {
            throw e.with_location(path, line_no);
        }
    }
    if (in.bad())
        throw IoError("read failure on " + path);
    return corpus;
}

inline Corpus merge(std::vector<Corpus> parts) {
    Corpus merged;
    for (auto& part : parts) {
        for (auto& src : part.provenance.sources)
            merged.provenance.sources.push_back(std::move(src));
        if (part.provenance.loaded_at > merged.provenance.loaded_at)
            merged.provenance.loaded_at = part.provenance.loaded_at;
        for (auto& doc : part.docs) merged.docs.push_back(std::move(doc));
    }
    return merged;
}

// Canonical form: terms sorted lexicographically (byte order).
inline std::vector<TermCount> canonical_terms(const Document& doc) {
    std::vector<TermCount> sorted = doc.terms;
    std::sort(sorted.begin(), sorted.end(),
              [](const TermCount& a, const TermCount& b) { return a.term < b.term; });
    return sorted;
}

inline std::string serialize_document(const Document& doc) {
    std::string line;
    for (const auto& tc : canonical_terms(doc)) {
        line += tc.term;
        line += ':';
        line += std::to_string(tc.count);
        line += ' ';
    }
    line += kLabelSentinel;
    line += ':';
    line += to_string(doc.label);
    return line;
}

// Cache format: the input format plus #lang# and #domain# fields, so a tagged
// corpus round-trips through one file.
inline std::string serialize_cache_line(const Document& doc) {
    std::string line = serialize_document(doc);
    line += ' ';
    line += kLangSentinel;
    line += ':';
    line += to_string(doc.language);
    if (!doc.domain.empty()) {
        line += ' ';
        line += kDomainSentinel;
        line += ':';
        line += doc.domain;
    }
    return line;
}

inline void write_corpus_cache(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    for (const auto& doc : corpus.docs) out << serialize_cache_line(doc) << '\n';
    if (!out)
        throw IoError("write failure on " + path);
}

inline Corpus read_corpus_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    Corpus corpus;
    corpus.provenance.sources.push_back(path);
    corpus.provenance.loaded_at = std::chrono::system_clock::now();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            Document doc;
            doc.id = path + ":" + std::to_string(line_no);
            detail::TermAccumulator terms;
            bool have_label = false, have_lang = false;
            detail::for_each_token(line, [&](std::string_view token) {
                auto [term, value] = detail::split_pair(token);
                if (term == kLabelSentinel) {
                    doc.label = parse_sentiment(value);
                    have_label = true;
                } else if (term == kLangSentinel) {
                    doc.language = parse_language(value);
                    have_lang = true;
                } else if (term == kDomainSentinel) {
                    doc.domain = std::string(value);
                } else {
                    terms.add(term, detail::parse_count(term, value));
                }
            });
            if (!have_label)
                throw ParseError(ParseError::Kind::MissingLabel,
                                 "line has no #label# pair");
            if (!have_lang)
                throw ParseError(ParseError::Kind::MalformedPair,
                                 "cache line has no #lang# pair");
            doc.terms = terms.take();
            corpus.docs.push_back(std::move(doc));
        } catch (const ParseError& e) {
            throw e.with_location(path, line_no);
        }
    }
    if (in.bad())
        throw IoError("read failure on " + path);
    return corpus;
}

}
