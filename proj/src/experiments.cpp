#include "qbattery/experiments.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <thread>

#include "qbattery/errors.hpp"
#include "qbattery/output.hpp"

namespace qbattery {

namespace fs = std::filesystem;

namespace {

constexpr double kWindowSlack = 1e-12;

ChargingOptions charging_options(const RunConfig& config) {
  ChargingOptions options;
  options.propagation = config.propagation();
  options.leakage_warn = config.leakage_warn;
  options.track_boson_entropy = config.track_boson_entropy;
  return options;
}

EvolutionTrace evolve_model(const RunConfig& config, const ModelParams& model, double t_end) {
  const std::vector<double> times = time_grid(t_end, config.dt);
  return simulate_charging(model, config.spec(), config.boson, times, charging_options(config));
}

void require_single_run(const RunConfig& config) {
  if (config.is_sweep()) throw ConfigError("sweep_param", "evolution runs need sweep_param = none");
}

void require_sweep(const RunConfig& config, Reduction reduction) {
  if (!config.is_sweep()) throw ConfigError("sweep_param", "this command needs a sweep (sweep_param != none)");
  if (config.sweep.reduction != reduction) {
    throw ConfigError("sweep_reduction", "this command needs sweep_reduction = " + std::string(to_string(reduction)));
  }
}

std::string point_name(std::size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%04zu", index);
  return buffer;
}

void warn_leakage(const EvolutionTrace& trace, const std::string& label) {
  if (trace.leakage_warning) {
    std::fprintf(stderr, "warning: %s: top Fock level population reached %.3e\n", label.c_str(), trace.max_leakage);
  }
}

}  // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

EvolutionTrace evolve(const RunConfig& config) {
  require_single_run(config);
  return evolve_model(config, config.model, config.t_max);
}

EvolutionTrace run_evolution(const RunConfig& config) {
  EvolutionTrace trace = evolve(config);
  const fs::path dir = config.output_dir;
  write_file_atomic(dir / "evolution.csv", evolution_csv(trace));
  nlohmann::json meta = metadata_base(config, "evolve");
  meta["columns"] = evolution_columns(config.model.n_ions());
  meta["diagnostics"] = trace_diagnostics(trace);
  write_file_atomic(dir / "evolution.json", meta.dump(2) + "\n");
  warn_leakage(trace, "evolve");
  return trace;
}

std::vector<EvolutionTrace> trace_sweep(const RunConfig& config) {
  require_sweep(config, Reduction::trace);
  std::vector<EvolutionTrace> traces(config.sweep.values.size());
  parallel_for(traces.size(), config.workers, [&](std::size_t i) {
    const ModelParams model = with_sweep_value(config.model, config.sweep.param, config.sweep.values[i]);
    traces[i] = evolve_model(config, model, config.t_max);
  });
  return traces;
}

std::vector<EvolutionTrace> run_trace_sweep(const RunConfig& config) {
  std::vector<EvolutionTrace> traces = trace_sweep(config);
  const fs::path dir = config.output_dir;
  std::string summary = std::string(to_string(config.sweep.param)) + ",E_c_final,E_e_final,S_final,max_leakage\n";
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const std::string name = "evolution_" + point_name(i) + ".csv";
    write_file_atomic(dir / name, evolution_csv(traces[i]));
    const EvolutionRecord& last = traces[i].records.back();
    summary += format_double(config.sweep.values[i]) + "," + format_double(last.charging) + "," +
               format_double(last.ergotropy) + "," + format_double(last.entropy) + "," +
               format_double(traces[i].max_leakage) + "\n";
    nlohmann::json point = trace_diagnostics(traces[i]);
    point["value"] = config.sweep.values[i];
    point["file"] = name;
    points.push_back(point);
    warn_leakage(traces[i], "sweep point " + std::to_string(i));
  }
  write_file_atomic(dir / "sweep.csv", summary);
  nlohmann::json meta = metadata_base(config, "evolve");
  meta["columns"] = evolution_columns(config.model.n_ions());
  meta["points"] = points;
  write_file_atomic(dir / "sweep.json", meta.dump(2) + "\n");
  return traces;
}

MaxScanPoint window_maxima(const EvolutionTrace& trace, double window_start, double window_end) {
  MaxScanPoint point;
  bool any = false;
  for (const EvolutionRecord& r : trace.records) {
    if (r.t < window_start - kWindowSlack || r.t > window_end + kWindowSlack) continue;
    if (!any || r.charging > point.max_charging) {
      point.max_charging = r.charging;
      point.t_max_charging = r.t;
    }
    if (!any || r.ergotropy > point.max_ergotropy) {
      point.max_ergotropy = r.ergotropy;
      point.t_max_ergotropy = r.t;
    }
    any = true;
  }
  if (!any) throw ParameterError("no samples inside the maximum window");
  point.max_leakage = trace.max_leakage;
  point.leakage_warning = trace.leakage_warning;
  return point;
}

MaxScanTable max_scan(const RunConfig& config) {
  require_sweep(config, Reduction::max_over_window);
  MaxScanTable table;
  table.param = config.sweep.param;
  table.window_start = config.window_start;
  table.window_end = config.window_end;
  table.points.resize(config.sweep.values.size());
  parallel_for(table.points.size(), config.workers, [&](std::size_t i) {
    const double value = config.sweep.values[i];
    const ModelParams model = with_sweep_value(config.model, config.sweep.param, value);
    const EvolutionTrace trace = evolve_model(config, model, config.window_end);
    table.points[i] = window_maxima(trace, config.window_start, config.window_end);
    table.points[i].value = value;
  });
  return table;
}

MaxScanTable run_max_scan(const RunConfig& config) {
  MaxScanTable table = max_scan(config);
  const fs::path dir = config.output_dir;
  write_file_atomic(dir / "maxscan.csv", max_scan_csv(table));
  nlohmann::json meta = metadata_base(config, "maxscan");
  bool warning = false;
  double leak = 0.0;
  for (const auto& p : table.points) {
    warning = warning || p.leakage_warning;
    leak = std::max(leak, p.max_leakage);
  }
  meta["diagnostics"] = {{"max_leakage", leak}, {"leakage_warning", warning}};
  write_file_atomic(dir / "maxscan.json", meta.dump(2) + "\n");
  if (warning) std::fprintf(stderr, "warning: maxscan: top Fock level population reached %.3e\n", leak);
  return table;
}

std::vector<SpectrumScan> spectrum(const RunConfig& config) {
  if (config.sweep.param != SweepParam::j_hop) {
    throw ConfigError("sweep_param", "spectrum scans sweep j_hop");
  }
  std::vector<HoppingMode> modes;
  if (config.spectrum_modes != SpectrumModes::excitation_conserving) modes.push_back(HoppingMode::full);
  if (config.spectrum_modes != SpectrumModes::full) modes.push_back(HoppingMode::excitation_conserving);
  std::vector<SpectrumScan> scans;
  for (HoppingMode mode : modes) {
    ModelParams model = config.model;
    model.hopping_mode = mode;
    scans.push_back(spectrum_scan(model, config.sweep.values));
  }
  return scans;
}

std::vector<SpectrumScan> run_spectrum_scan(const RunConfig& config) {
  std::vector<SpectrumScan> scans = spectrum(config);
  const fs::path dir = config.output_dir;
  nlohmann::json files = nlohmann::json::array();
  for (const SpectrumScan& scan : scans) {
    const std::string name = "spectrum_" + std::string(to_string(scan.mode)) + ".csv";
    write_file_atomic(dir / name, spectrum_csv(scan));
    files.push_back(name);
  }
  nlohmann::json meta = metadata_base(config, "spectrum");
  meta["files"] = files;
  write_file_atomic(dir / "spectrum.json", meta.dump(2) + "\n");
  return scans;
}

}  // namespace qbattery
