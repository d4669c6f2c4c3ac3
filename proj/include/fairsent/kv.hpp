#pragma once

// Flat `key = value` text files, used both for run configs (read) and for
// machine-readable outputs (written). Lines starting with `#` are comments.
// Values may be wrapped in double quotes; one layer is stripped. Duplicate
// keys: the last one wins. Writers emit keys in insertion order so output
// files are byte-stable.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairsent/errors.hpp"
#include "fairsent/text.hpp"

namespace fairsent {

class KvWriter {
public:
    void comment(std::string_view text) {
        buf_ += "# ";
        buf_ += text;
        buf_ += '\n';
    }

    void blank() { buf_ += '\n'; }

    void add(std::string_view key, std::string_view value) {
        buf_ += key;
        buf_ += " = ";
        buf_ += value;
        buf_ += '\n';
    }

    void add(std::string_view key, const char* value) {
        add(key, std::string_view(value));
    }

    void add(std::string_view key, const std::string& value) {
        add(key, std::string_view(value));
    }

    void add(std::string_view key, double value) {
        add(key, std::string_view(detail::format_double(value)));
    }

    void add(std::string_view key, bool value) {
        add(key, std::string_view(value ? "true" : "false"));
    }

    template <typename T>
        requires std::is_integral_v<T>
    void add(std::string_view key, T value) {
        add(key, std::string_view(std::to_string(value)));
    }

    const std::string& str() const { return buf_; }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + path + " for writing");
        out << buf_;
        if (!out)
            throw IoError("write failure on " + path);
    }

private:
    std::string buf_;
};

struct KvMap {
    std::vector<std::pair<std::string, std::string>> entries;  // file order
    std::map<std::string, std::string> index;                  // last wins

    bool has(const std::string& key) const { return index.count(key) > 0; }

    std::optional<std::string> get(const std::string& key) const {
        auto it = index.find(key);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    std::string get_or(const std::string& key, std::string fallback) const {
        auto v = get(key);
        return v ? *v : std::move(fallback);
    }

    double get_double(const std::string& key, double fallback) const {
        auto v = get(key);
        return v ? detail::parse_double(*v) : fallback;
    }

    std::uint64_t get_u64(const std::string& key,
                          std::uint64_t fallback) const {
        auto v = get(key);
        return v ? detail::parse_u64(*v) : fallback;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto v = get(key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError("key '" + key + "' must be true or false, got '" +
                          *v + "'");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

}

inline KvMap parse_kv(std::string_view content, const std::string& source) {
    KvMap kv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        auto eol = content.find('\n', pos);
        std::string_view line = content.substr(
            pos, eol == std::string_view::npos ? content.size() - pos
                                               : eol - pos);
        pos = eol == std::string_view::npos ? content.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(source + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        std::string_view key = detail::trim(line.substr(0, eq));
        std::string_view value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(line_no) +
                              ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value.remove_prefix(1);
            value.remove_suffix(1);
        }
        kv.entries.emplace_back(std::string(key), std::string(value));
        kv.index[std::string(key)] = std::string(value);
    }
    return kv;
}

inline KvMap read_kv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failure on " + path);
    return parse_kv(content, path);
}

// Comma-separated list value, entries trimmed, empties dropped.
inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        auto comma = value.find(',', pos);
        std::string_view item = value.substr(
            pos, comma == std::string_view::npos ? value.size() - pos
                                                 : comma - pos);
        pos = comma == std::string_view::npos ? value.size() + 1 : comma + 1;
        item = detail::trim(item);
        if (!item.empty()) out.emplace_back(item);
    }
    return out;
}

}
