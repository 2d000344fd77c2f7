#include "qbattery/output.hpp"

#include <charconv>
#include <fstream>

#include "qbattery/config.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/experiments.hpp"

namespace qbattery {

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("failed to format floating-point value");
  return std::string(buffer, ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

void append_row(std::string& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  out += '\n';
}

void append_header(std::string& out, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += ',';
    out += columns[i];
  }
  out += '\n';
}

}  // namespace

std::vector<std::string> evolution_columns(std::size_t n_ions) {
  std::vector<std::string> cols = {"t", "E", "E_c", "E_e", "S"};
  for (std::size_t n = 1; n <= n_ions; ++n) cols.push_back("sigma_" + std::to_string(n));
  for (const char* c : {"n_exc", "parity", "leakage", "norm_error", "energy_drift"}) cols.emplace_back(c);
  return cols;
}

std::string evolution_csv(const EvolutionTrace& trace) {
  const std::size_t n_ions = trace.records.empty() ? 0 : trace.records.front().sigma.size();
  std::string out;
  append_header(out, evolution_columns(n_ions));
  std::vector<double> row;
  for (const EvolutionRecord& r : trace.records) {
    row = {r.t, r.energy, r.charging, r.ergotropy, r.entropy};
    row.insert(row.end(), r.sigma.begin(), r.sigma.end());
    row.insert(row.end(), {r.n_exc, r.parity, r.leakage, r.norm_error, r.energy_drift});
    append_row(out, row);
  }
  return out;
}

std::string max_scan_csv(const MaxScanTable& table) {
  std::string out;
  append_header(out, {std::string(to_string(table.param)), "max_E_c", "t_max_E_c", "max_E_e", "t_max_E_e",
                      "max_leakage", "leakage_warning"});
  for (const MaxScanPoint& p : table.points) {
    append_row(out, {p.value, p.max_charging, p.t_max_charging, p.max_ergotropy, p.t_max_ergotropy, p.max_leakage,
                     p.leakage_warning ? 1.0 : 0.0});
  }
  return out;
}

std::string spectrum_csv(const SpectrumScan& scan) {
  std::vector<std::string> cols = {"j_hop"};
  const Index levels = scan.eigenvalues.empty() ? 0 : scan.eigenvalues.front().size();
  for (Index k = 1; k <= levels; ++k) cols.push_back("e_" + std::to_string(k));
  for (const char* c : {"m_z", "o_z", "degenerate"}) cols.emplace_back(c);
  std::string out;
  append_header(out, cols);
  for (std::size_t i = 0; i < scan.j_grid.size(); ++i) {
    std::vector<double> row = {scan.j_grid[i]};
    const Eigen::VectorXd& e = scan.eigenvalues[i];
    row.insert(row.end(), e.data(), e.data() + e.size());
    row.insert(row.end(), {scan.m_z[i], scan.o_z[i], scan.degenerate[i] ? 1.0 : 0.0});
    append_row(out, row);
  }
  return out;
}

nlohmann::json metadata_base(const RunConfig& config, std::string_view command) {
  nlohmann::json meta;
  meta["tool"] = "qbattery";
  meta["version"] = QBATTERY_VERSION;
  meta["command"] = std::string(command);
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [key, value] : to_key_values(config)) cfg[key] = value;
  meta["config"] = cfg;
  meta["config_text"] = to_config_text(config);
  meta["method"] = std::string(to_string(config.resolved_method()));
  return meta;
}

nlohmann::json trace_diagnostics(const EvolutionTrace& trace) {
  return {
      {"ground_energy", trace.e0},
      {"degenerate_ground", trace.degenerate_ground},
      {"total_energy", trace.total_energy},
      {"max_leakage", trace.max_leakage},
      {"leakage_warning", trace.leakage_warning},
      {"max_norm_error", trace.max_norm_error},
      {"max_energy_drift", trace.max_energy_drift},
      {"samples", trace.records.size()},
      {"krylov_builds", trace.stats.krylov_builds},
      {"krylov_substeps", trace.stats.substeps},
      {"krylov_error_bound", trace.stats.error_bound},
      {"dense_blocks", trace.stats.dense_blocks},
  };
}

}  // namespace qbattery
