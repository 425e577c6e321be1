#pragma once

// Experiment kinds, configuration validation and the runner behind the
// schurlab command line tool.

#include <filesystem>
#include <string>
#include <vector>

#include "schurlab/report.hpp"

namespace schurlab {

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string name;
    std::string kind;
    // Resolved parameters: defaults filled in, every key checked against the kind.
    Json parameters = Json::object();
    // Relative paths resolve against output_dir(); empty means "<name>.json".
    std::string output_path;
};

struct ParamSpec {
    std::string name;
    // int, seed (non-negative int), number, exponent (number or "inf"),
    // string, int[], number[], exponent[], exponent[][], string[]
    std::string type;
    Json default_value;  // null when required
    std::string help;
};

struct KindSpec {
    std::string kind;
    std::string summary;
    bool randomized = false;
    std::vector<ParamSpec> params;
};

[[nodiscard]] const std::vector<KindSpec>& experiment_kinds();
/// Throws ConfigInvalid for unknown kinds.
[[nodiscard]] const KindSpec& kind_spec(const std::string& kind);
/// Parameter schema of a kind as JSON.
[[nodiscard]] Json describe(const std::string& kind);

/// Validates a config document. Throws ConfigInvalid with the offending key.
[[nodiscard]] ExperimentConfig parse_config(const Json& doc);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs the experiment. Module errors are caught and recorded in
/// Report::error together with the case that raised them.
[[nodiscard]] Report run(const ExperimentConfig& config);

/// 0 pass, 1 assertion violation, 2 config or runtime error.
[[nodiscard]] int exit_code(const Report& r) noexcept;

struct SelfCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// The small closed-form example corpus: exact identities and trivial
/// inputs across every module.
[[nodiscard]] std::vector<SelfCheck> selftest();

/// Where run output goes for this config.
[[nodiscard]] std::filesystem::path report_path(const ExperimentConfig& config);

}  // namespace schurlab
