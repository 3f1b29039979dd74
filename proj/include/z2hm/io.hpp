#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "z2hm/correction.hpp"
#include "z2hm/experiments.hpp"
#include "z2hm/lattice.hpp"
#include "z2hm/mitigation.hpp"
#include "z2hm/model.hpp"
#include "z2hm/simulator.hpp"

namespace z2hm {

using Json = nlohmann::json;

// Every file states the bit order: character i from the right is qubit i.
inline constexpr const char* kBitOrderNote = "little-endian: rightmost character is qubit 0";

// YAML configuration. Unknown keys, missing physics parameters (m, g,
// lambda, dt) and invalid values raise ConfigError with line and column.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// "flake:R", "brick:RxC" or "chain:N".
LatticeSpec parse_lattice_spec(const std::string& text);

// Canonical JSON of the full configuration (keys sorted) and its FNV-1a hash.
Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);
std::string config_hash(const ExperimentConfig& config);

Json estimate_to_json(const Estimate& e);
Estimate estimate_from_json(const Json& j);

Json lattice_to_json(const LatticeGraph& lattice);
Json hamiltonian_to_json(const Hamiltonian& h);
Json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const Json& j);

// JSON lines: a header object followed by one object per time point.
std::string timeseries_to_jsonl(const TimeSeries& ts);
TimeSeries timeseries_from_jsonl(const std::string& text);
// Quotes a cell containing a comma, quote or newline.
std::string csv_quote(const std::string& cell);
// Matrix of means: header "time,<obs>...", one row per time, %.17g.
std::string timeseries_to_csv(const TimeSeries& ts);
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable csv_from_string(const std::string& text);

// Text shot table: '#' header lines with metadata, then "bits seed twirl flips" rows.
std::string shots_to_text(const ShotTable& table);
ShotTable shots_from_text(const std::string& text);

Json decoder_report_to_json(const DecoderReport& report);

struct RunManifest {
  std::string config_hash;
  std::map<std::string, std::string> versions;
  std::map<std::string, std::uint64_t> seeds;
  std::string started_utc;
  double wall_seconds = 0;
  ShotAccounting shots;
  std::vector<std::string> outputs;
  bool operator==(const RunManifest& o) const = default;
};
Json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

std::string read_file(const std::string& path);
// Writes atomically through a temporary file in the same directory.
void write_file(const std::string& path, const std::string& content);

}  // namespace z2hm
