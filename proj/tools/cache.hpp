#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace nuqcli {

std::string sha256_hex(const std::string& data);

// Key/value records, one JSON object per line. Writers rewrite the file with the new records
// appended and rename it into place, so readers never see a partial file.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path path);

    std::optional<nlohmann::json> get(const std::string& key);
    void put(const std::string& key, const nlohmann::json& value);

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    void load();

    std::filesystem::path path_;
    std::mutex mu_;
    std::map<std::string, nlohmann::json> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

}  // namespace nuqcli
