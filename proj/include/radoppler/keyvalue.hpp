#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace radoppler {

/// Plain-text `key = value` document shared by cube sidecars, pipeline
/// configs, scenario files, matrix sidecars and run manifests.
///
/// Lines starting with '#' and blank lines are ignored. Keys may repeat
/// (scenario files carry one `scatterer = {...}` line per scatterer); entry
/// order is preserved so that writing is deterministic.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile parse(std::string_view text, std::string_view source = "<memory>");
    static KeyValueFile load(const std::filesystem::path& path);

    void save(const std::filesystem::path& path) const;
    std::string to_string() const;

    // Replaces the first entry with this key, or appends.
    void set(std::string key, std::string value);
    void set(std::string key, double value);
    void set(std::string key, std::uint64_t value);
    void add(std::string key, std::string value);

    bool contains(std::string_view key) const;
    std::optional<std::string> find(std::string_view key) const;
    std::vector<std::string> find_all(std::string_view key) const;

    const std::string& require(std::string_view key) const;
    double require_double(std::string_view key) const;
    std::uint64_t require_count(std::string_view key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string source_ = "<memory>";
};

// Round-trip exact decimal rendering (%.17g).
std::string format_double(double value);

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_count(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

std::string trim(std::string_view text);

}  // namespace radoppler
