#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qbattery/dynamics.hpp"

namespace qbattery {

struct RunConfig;
struct MaxScanTable;

/// Shortest-safe round-trip text: 17 significant digits.
std::string format_double(double value);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> evolution_columns(std::size_t n_ions);
std::string evolution_csv(const EvolutionTrace& trace);
std::string max_scan_csv(const MaxScanTable& table);
std::string spectrum_csv(const SpectrumScan& scan);

/// Sidecar skeleton: tool, version, command and the canonical config echo.
nlohmann::json metadata_base(const RunConfig& config, std::string_view command);
nlohmann::json trace_diagnostics(const EvolutionTrace& trace);

}  // namespace qbattery
