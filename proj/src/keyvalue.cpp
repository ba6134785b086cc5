#include "radoppler/keyvalue.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "radoppler/error.hpp"

namespace radoppler {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    if (s.empty()) {
        throw InvalidInput("empty value for " + std::string(what));
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw InvalidInput("cannot parse '" + s + "' as a number for " + std::string(what));
    }
    return v;
}

std::uint64_t parse_count(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    if (s.empty() || s.front() == '-' || s.front() == '+') {
        throw InvalidInput("cannot parse '" + s + "' as a count for " + std::string(what));
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw InvalidInput("cannot parse '" + s + "' as a count for " + std::string(what));
    }
    return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw InvalidInput("cannot parse '" + s + "' as a boolean for " + std::string(what));
}

KeyValueFile KeyValueFile::parse(std::string_view text, std::string_view source) {
    KeyValueFile kv;
    kv.source_ = std::string(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const std::string line = trim(text.substr(pos, nl - pos));
        ++line_no;
        pos = nl + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput(kv.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) {
            throw InvalidInput(kv.source_ + ":" + std::to_string(line_no) + ": empty key");
        }
        kv.entries_.emplace_back(std::move(key), trim(std::string_view(line).substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void KeyValueFile::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidInput("cannot write " + path.string());
    }
    out << to_string();
    if (!out) {
        throw InvalidInput("write failed for " + path.string());
    }
}

std::string KeyValueFile::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void KeyValueFile::set(std::string key, std::string value) {
    for (auto& entry : entries_) {
        if (entry.first == key) {
            entry.second = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueFile::set(std::string key, double value) { set(std::move(key), format_double(value)); }

void KeyValueFile::set(std::string key, std::uint64_t value) {
    set(std::move(key), std::to_string(value));
}

void KeyValueFile::add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
}

bool KeyValueFile::contains(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> KeyValueFile::find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::vector<std::string> KeyValueFile::find_all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
        if (k == key) {
            out.push_back(v);
        }
    }
    return out;
}

const std::string& KeyValueFile::require(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) {
            return v;
        }
    }
    throw InvalidInput(source_ + ": missing key '" + std::string(key) + "'");
}

double KeyValueFile::require_double(std::string_view key) const {
    return parse_double(require(key), source_ + ": " + std::string(key));
}

std::uint64_t KeyValueFile::require_count(std::string_view key) const {
    return parse_count(require(key), source_ + ": " + std::string(key));
}

}  // namespace radoppler
