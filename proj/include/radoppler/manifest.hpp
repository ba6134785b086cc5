#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "radoppler/keyvalue.hpp"

namespace radoppler {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Provenance record written next to every artifact an invocation produces.
///
/// Everything except the final `timestamp` line is a pure function of the
/// command line and the input bytes.
class RunManifest {
public:
    RunManifest(std::string command, std::string command_line);

    KeyValueFile& fields() { return fields_; }
    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);

    void save(const std::filesystem::path& path) const;

private:
    KeyValueFile fields_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

}  // namespace radoppler
