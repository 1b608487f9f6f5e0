#pragma once
// File cache keyed by the SHA-256 of a canonical query string.

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "records.hpp"

namespace skl {

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw ComputationError("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

class RecordCache {
public:
    explicit RecordCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path path_for(const std::string& query) const {
        auto h = sha256_hex(query);
        return dir_ / h.substr(0, 2) / (h + ".json");
    }

    std::optional<RecordSet> get(const std::string& query) const {
        auto p = path_for(query);
        if (!std::filesystem::exists(p)) return std::nullopt;
        return load_records(p);
    }

    // validated before anything touches the disk
    void put(const std::string& query, const RecordSet& s) const { save_records(s, path_for(query)); }

private:
    std::filesystem::path dir_;
};

}  // namespace skl
