#include "relaycs/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace relaycs {

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

std::string cell_value(const SummaryRow& row, const std::string& column) {
  if (column == "m_bs") return std::to_string(row.m_bs);
  if (column == "snr_db") return format_double(row.snr_db);
  if (column == "blockage" || column == "regime") return row.series;
  if (column == "fault_count") return std::to_string(row.fault_count);
  if (column == "trials") return std::to_string(row.trials);
  if (column == "success_rate") return format_double(row.success_rate);
  if (column == "success_stderr") return format_double(row.success_stderr);
  if (column == "mean_nmse") return format_double(row.mean_nmse);
  if (column == "nmse_stderr") return format_double(row.nmse_stderr);
  if (column == "diag_success_rate") {
    return format_double(row.diag_success_rate);
  }
  throw std::invalid_argument("csv: unknown column " + column);
}

ordered_json solver_json(const SolverSettings& solver) {
  ordered_json j;
  j["max_iterations"] = solver.max_iterations;
  j["tolerance"] = solver.tolerance;
  j["lambda_scale"] = solver.lambda_scale;
  j["lambda_max_fraction"] = solver.lambda_max_fraction;
  j["diagnosis_support_fraction"] = solver.diagnosis_support_fraction;
  j["estimator_support_fraction"] = solver.estimator_support_fraction;
  j["estimator_refit_gate"] = solver.estimator_refit_gate;
  return j;
}

ordered_json config_json(const ExperimentConfig& config) {
  ordered_json j;
  j["scenario"] = scenario_name(config.scenario);
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  j["n_bs"] = config.n_bs;
  j["n_ms"] = config.n_ms;
  j["g_bs"] = config.g_bs;
  j["g_ms"] = config.g_ms;
  j["num_paths"] = config.num_paths;
  j["m_bs_sweep"] = config.m_bs_sweep;
  j["m_ms"] = config.m_ms;
  j["fault_counts"] = config.fault_counts;
  j["snr_db_sweep"] = config.snr_db_sweep;
  j["relay_snr_db"] = config.relay_snr_db;
  std::vector<std::string> kinds;
  for (BlockageKind kind : config.blockage_kinds) {
    kinds.push_back(blockage_kind_name(kind));
  }
  j["blockage_kinds"] = kinds;
  j["solver"] = solver_json(config.solver);
  return j;
}

void apply_solver_json(SolverSettings& solver, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "max_iterations") {
        solver.max_iterations = value.get<int>();
      } else if (key == "tolerance") {
        solver.tolerance = value.get<double>();
      } else if (key == "lambda_scale") {
        solver.lambda_scale = value.get<double>();
      } else if (key == "lambda_max_fraction") {
        solver.lambda_max_fraction = value.get<double>();
      } else if (key == "diagnosis_support_fraction") {
        solver.diagnosis_support_fraction = value.get<double>();
      } else if (key == "estimator_support_fraction") {
        solver.estimator_support_fraction = value.get<double>();
      } else if (key == "estimator_refit_gate") {
        solver.estimator_refit_gate = value.get<double>();
      } else {
        throw std::invalid_argument("config: unknown key 'solver." + key +
                                    "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config key 'solver." + key +
                                  "': " + e.what());
    }
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::vector<std::string> csv_columns(Scenario scenario) {
  switch (scenario) {
    case Scenario::fig1_diagnosis:
      return {"m_bs",   "blockage",     "fault_count",
              "trials", "success_rate", "success_stderr"};
    case Scenario::fig2_nmse_vs_measurements:
      return {"m_bs",      "regime",      "fault_count",      "trials",
              "mean_nmse", "nmse_stderr", "diag_success_rate"};
    case Scenario::fig3_nmse_vs_snr:
      return {"snr_db",    "regime",      "fault_count",      "trials",
              "mean_nmse", "nmse_stderr", "diag_success_rate"};
    case Scenario::custom:
      return {"m_bs",   "snr_db",    "regime",      "fault_count",
              "trials", "mean_nmse", "nmse_stderr", "diag_success_rate"};
  }
  throw std::invalid_argument("csv_columns: unknown scenario");
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("csv: cannot open for writing: " + path.string());
  }
  const std::vector<std::string> columns = csv_columns(table.scenario);
  for (size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out << ',';
    out << columns[c];
  }
  out << '\n';
  for (const SummaryRow& row : table.rows) {
    for (size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out << ',';
      out << cell_value(row, columns[c]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("csv: write failed: " + path.string());
  }
}

void emit_metadata(const ExperimentConfig& config,
                   const std::filesystem::path& path) {
  ordered_json root;
  root["artifact"] = "relaycs";
  root["version"] = kArtifactVersion;
  root["config"] = config_json(config);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("metadata: cannot open for writing: " +
                             path.string());
  }
  out << root.dump(2) << '\n';
  out.flush();
  if (!out) {
    throw std::runtime_error("metadata: write failed: " + path.string());
  }
}

ParsedCsv parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("csv: cannot open for reading: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  ParsedCsv parsed;
  std::vector<std::vector<std::string>> lines;
  std::string line;
  std::istringstream stream(text);
  while (std::getline(stream, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) {
    throw std::runtime_error("csv: empty file: " + path.string());
  }
  parsed.header = lines.front();
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != parsed.header.size()) {
      throw std::runtime_error("csv: ragged row in " + path.string());
    }
    parsed.rows.push_back(std::move(lines[i]));
  }
  return parsed;
}

std::string to_config_json(const ExperimentConfig& config) {
  return config_json(config).dump(2) + "\n";
}

ExperimentConfig apply_config_json(ExperimentConfig base,
                                   const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: parse error: ") +
                                e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: root must be a JSON object");
  }

  // A scenario change re-bases the defaults before other keys apply.
  if (j.contains("scenario")) {
    const Scenario s = parse_scenario(j.at("scenario").get<std::string>());
    if (s != base.scenario) base = defaults_for(s);
  }

  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "scenario") {
        continue;  // handled above
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "trials") {
        base.trials = value.get<int>();
      } else if (key == "threads") {
        base.threads = value.get<int>();
      } else if (key == "n_bs") {
        base.n_bs = value.get<int>();
      } else if (key == "n_ms") {
        base.n_ms = value.get<int>();
      } else if (key == "g_bs") {
        base.g_bs = value.get<int>();
      } else if (key == "g_ms") {
        base.g_ms = value.get<int>();
      } else if (key == "num_paths") {
        base.num_paths = value.get<int>();
      } else if (key == "m_bs_sweep") {
        base.m_bs_sweep = value.get<std::vector<int>>();
      } else if (key == "m_ms") {
        base.m_ms = value.get<int>();
      } else if (key == "fault_counts") {
        base.fault_counts = value.get<std::vector<int>>();
      } else if (key == "snr_db_sweep") {
        base.snr_db_sweep = value.get<std::vector<double>>();
      } else if (key == "relay_snr_db") {
        base.relay_snr_db = value.get<double>();
      } else if (key == "blockage_kinds") {
        base.blockage_kinds.clear();
        for (const std::string& name :
             value.get<std::vector<std::string>>()) {
          base.blockage_kinds.push_back(parse_blockage_kind(name));
        }
      } else if (key == "solver") {
        apply_solver_json(base.solver, value);
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config_file(ExperimentConfig base,
                                  const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("config: cannot open: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return apply_config_json(std::move(base), buffer.str());
}

}  // namespace relaycs
