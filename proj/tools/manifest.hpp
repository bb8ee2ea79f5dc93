#pragma once

#include <json.hpp>

#include <optional>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hypodist::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Everything needed to replay a run: the invocation, the resolved
/// configuration, the seed, and digests of every input file.
class RunManifest {
public:
    RunManifest(std::string subcommand, std::vector<std::string> argv);

    void set_config(nlohmann::ordered_json config) { config_ = std::move(config); }
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);
    void finish() { elapsed_ = std::chrono::steady_clock::now() - start_; }

    nlohmann::ordered_json to_json() const;
    void write(const std::filesystem::path& path) const;

private:
    std::string subcommand_;
    std::vector<std::string> argv_;
    nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed_;
    nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
    nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    std::string started_utc_;
    std::chrono::steady_clock::duration elapsed_{};
};

} // namespace hypodist::cli
