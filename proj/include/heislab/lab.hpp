#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace heislab {

// Invalid configuration or command line; maps to exit status 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& suite_names();

struct ExperimentConfig {
    std::string suite;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool timing = false;
    std::filesystem::path out = "heislab_out";
    // Suite parameters: the object stored under the suite name in the config file.
    nlohmann::json params = nlohmann::json::object();

    // Reads a JSON file. `suite` overrides the file's "suite" key.
    static ExperimentConfig load(const std::filesystem::path& file, const std::optional<std::string>& suite = {});
    static ExperimentConfig from_json(const nlohmann::json& j, const std::optional<std::string>& suite = {});
};

struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct SuiteResult {
    std::vector<std::filesystem::path> files;
    std::vector<Check> checks;
    double wall_time = 0.0;

    bool ok() const;
};

// Runs the suite, writes its CSV files and manifest.json under cfg.out.
SuiteResult run(const ExperimentConfig& cfg);

}  // namespace heislab
