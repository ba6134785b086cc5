#include "radoppler/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "radoppler/error.hpp"
#include "radoppler/ingest.hpp"

namespace radoppler {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw InternalError("sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file_bytes(path)); }

RunManifest::RunManifest(std::string command, std::string command_line) {
    fields_.set("tool", std::string("radoppler"));
    fields_.set("tool_version", std::string(kToolVersion));
    fields_.set("command", std::move(command));
    fields_.set("command_line", std::move(command_line));
}

void RunManifest::add_input(const std::filesystem::path& path) {
    inputs_.emplace_back(path.string(), sha256_file(path));
}

void RunManifest::add_output(const std::filesystem::path& path) {
    outputs_.emplace_back(path.string(), sha256_file(path));
}

void RunManifest::save(const std::filesystem::path& path) const {
    KeyValueFile kv = fields_;
    for (const auto& [file, hash] : inputs_) {
        kv.add("input", file + " sha256:" + hash);
    }
    for (const auto& [file, hash] : outputs_) {
        kv.add("output", file + " sha256:" + hash);
    }
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    kv.add("timestamp", stamp);
    kv.save(path);
}

}  // namespace radoppler
