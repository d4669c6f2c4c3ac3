#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairsent {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Raised by the corpus parser; carries the offending location when known.
class ParseError : public Error {
public:
    enum class Kind { MissingLabel, MalformedPair, UnknownLabel };

    ParseError(Kind kind, const std::string& detail,
               const std::string& source = {}, std::size_t line_no = 0)
        : Error(format(kind, detail, source, line_no)),
          kind_(kind), detail_(detail), source_(source), line_no_(line_no) {}

    Kind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }
    const std::string& source() const { return source_; }
    std::size_t line_no() const { return line_no_; }

    ParseError with_location(const std::string& source, std::size_t line_no) const {
        return ParseError(kind_, detail_, source, line_no);
    }

private:
    static std::string format(Kind kind, const std::string& detail,
                              const std::string& source, std::size_t line_no) {
        std::string msg;
        if (!source.empty()) {
            msg += source;
            msg += ':';
            msg += std::to_string(line_no);
            msg += ": ";
        }
        switch (kind) {
        case Kind::MissingLabel: msg += "missing #label# pair"; break;
        case Kind::MalformedPair: msg += "malformed pair"; break;
        case Kind::UnknownLabel: msg += "unknown label"; break;
        }
        if (!detail.empty()) {
            msg += " (";
            msg += detail;
            msg += ')';
        }
        return msg;
    }

    Kind kind_;
    std::string detail_;
    std::string source_;
    std::size_t line_no_;
};

class EmptyCorpusError : public Error {
public:
    EmptyCorpusError() : Error("corpus is empty") {}
};

class EmptySubgroupError : public Error {
public:
    explicit EmptySubgroupError(const std::string& subgroup)
        : Error("subgroup " + subgroup + " has no documents; balancing is undefined") {}
};

class SingleClassError : public Error {
public:
    SingleClassError() : Error("training data contains a single class") {}
};

class NegativeFeatureError : public Error {
public:
    NegativeFeatureError() : Error("feature values must be non-negative") {}
};

class IndexOutOfVocabularyError : public Error {
public:
    IndexOutOfVocabularyError(std::size_t index, std::size_t vocab_size)
        : Error("feature index " + std::to_string(index) +
                " out of range for vocabulary of size " + std::to_string(vocab_size)) {}
};

class EmptyGroupError : public Error {
public:
    explicit EmptyGroupError(const std::string& group)
        : Error("group " + group + " has no members") {}
};

class UndefinedRateError : public Error {
public:
    explicit UndefinedRateError(const std::string& which)
        : Error(which + " is undefined (empty base population)") {}
};

class KTooLargeError : public Error {
public:
    KTooLargeError(std::size_t k, std::size_t n)
        : Error("cannot make " + std::to_string(k) + " folds from " +
                std::to_string(n) + " rows") {}
};

}
