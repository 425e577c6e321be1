#pragma once

// Experiment reports and their JSON / CSV serialization.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/torus.hpp"

namespace schurlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] bool empty() const noexcept { return rows.empty(); }
};

struct Report {
    Json config = Json::object();
    Json cases = Json::array();
    Json summary = Json::object();
    Json provenance = Json::object();
    CsvTable csv;
    bool passed = true;
    // Set when a module error aborted the run; {kind, message}.
    Json error = nullptr;

    [[nodiscard]] Json to_json() const;
};

enum class Format { json, csv };

/// Two-space indented JSON with every float written as %.17g. Non-finite
/// floats become the strings "inf", "-inf" and "nan".
[[nodiscard]] std::string dump_json(const Json& j);
/// Header row then one row per record, %.17g.
[[nodiscard]] std::string dump_csv(const CsvTable& t);

/// Writes the report to `path`. Throws IoFailure.
void emit(const Report& r, const std::filesystem::path& path, Format format);

/// Where reports go: $SCHURLAB_OUTPUT_DIR when set, otherwise `fallback`.
[[nodiscard]] std::filesystem::path output_dir(const std::filesystem::path& fallback);

/// List of {tuple, re, im}.
[[nodiscard]] Json to_json(const FourierSeries& s);
/// Witnesses as nested row-major arrays of [re, im] pairs.
[[nodiscard]] Json to_json(const NormEstimate& e);
[[nodiscard]] Json to_json(complex z);
/// Doubles that may be infinite; kInf is written as "inf".
[[nodiscard]] Json number(double x);

}  // namespace schurlab
