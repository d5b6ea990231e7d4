#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "relaycs/experiments.hpp"

namespace relaycs {

/// Doubles in output files: shortest form with 12 significant digits.
std::string format_double(double value);

/// Column layout of a scenario's summary CSV, in emission order.
std::vector<std::string> csv_columns(Scenario scenario);

/// Writes the table as UTF-8, LF-terminated CSV with a header row. Values
/// are plain decimals (format_double); series labels contain no commas.
void emit_csv(const Table& table, const std::filesystem::path& path);

/// Sidecar run description: full configuration and seed as JSON. Contains no
/// timestamps or host details, so identical runs produce identical bytes.
void emit_metadata(const ExperimentConfig& config,
                   const std::filesystem::path& path);

struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Strict reader for files produced by emit_csv (no quoting, LF endings).
ParsedCsv parse_csv(const std::filesystem::path& path);

/// JSON round-trip for configurations. to_config_json omits the thread count
/// (an execution detail, not part of the result definition); apply_config_json
/// rejects unknown keys and type mismatches with the offending key named.
std::string to_config_json(const ExperimentConfig& config);
ExperimentConfig apply_config_json(ExperimentConfig base,
                                   const std::string& json_text);
ExperimentConfig load_config_file(ExperimentConfig base,
                                  const std::filesystem::path& path);

}  // namespace relaycs
