#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "socsim/harness.hpp"

namespace socsim {

// Aggregated config errors, each "json.path: rule".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

// Parses the experiment JSON (see README for the schema), applies defaults,
// and validates every field. `level` is the only required key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved echo of a config; loading it back yields the same config.
nlohmann::json to_resolved_json(const ExperimentConfig& cfg);

// Re-serializes the resolved form into cfg.resolved_json.
void attach_resolved_json(ExperimentConfig& cfg);

} // namespace socsim
