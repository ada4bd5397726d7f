#include "cache.hpp"

#include <openssl/sha.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nuqcli {

std::string sha256_hex(const std::string& data) {
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned char c : md) {
        s.push_back(hex[c >> 4]);
        s.push_back(hex[c & 15]);
    }
    return s;
}

ResultCache::ResultCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

void ResultCache::load() {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        // a damaged line is skipped; the entry is simply recomputed
        auto rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("key") || !rec.contains("value")) continue;
        if (!rec["key"].is_string()) continue;
        entries_[rec["key"].get<std::string>()] = rec["value"];
    }
}

std::optional<nlohmann::json> ResultCache::get(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

void ResultCache::put(const std::string& key, const nlohmann::json& value) {
    std::lock_guard<std::mutex> lock(mu_);
    if (entries_.count(key)) return;
    entries_[key] = value;

    std::string existing;
    {
        std::ifstream in(path_, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        existing = ss.str();
    }
    if (!existing.empty() && existing.back() != '\n') existing.push_back('\n');
    nlohmann::json rec{{"key", key}, {"value", value}};

    std::filesystem::path tmp = path_;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << existing << rec.dump() << "\n";
        if (!out) return;  // cache is best effort
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace nuqcli
