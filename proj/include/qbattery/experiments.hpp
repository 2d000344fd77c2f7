#pragma once

// Experiment drivers behind the CLI subcommands. The compute functions
// (evolve, max_scan, spectrum) are pure; the run_* variants also write CSV
// plus a JSON sidecar into config.output_dir.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qbattery/config.hpp"
#include "qbattery/dynamics.hpp"

namespace qbattery {

EvolutionTrace evolve(const RunConfig& config);
EvolutionTrace run_evolution(const RunConfig& config);

/// One full trace per grid point (sweep_reduction = trace).
std::vector<EvolutionTrace> trace_sweep(const RunConfig& config);
std::vector<EvolutionTrace> run_trace_sweep(const RunConfig& config);

struct MaxScanPoint {
  double value = 0.0;
  double max_charging = 0.0;
  double t_max_charging = 0.0;
  double max_ergotropy = 0.0;
  double t_max_ergotropy = 0.0;
  double max_leakage = 0.0;
  bool leakage_warning = false;
};

struct MaxScanTable {
  SweepParam param = SweepParam::none;
  double window_start = 0.0;
  double window_end = 0.0;
  std::vector<MaxScanPoint> points;
};

/// Maxima of E_c and E_e over [window_start, window_end] of a trace.
MaxScanPoint window_maxima(const EvolutionTrace& trace, double window_start, double window_end);

MaxScanTable max_scan(const RunConfig& config);
MaxScanTable run_max_scan(const RunConfig& config);

/// One scan per requested hopping mode, over the j_hop grid.
std::vector<SpectrumScan> spectrum(const RunConfig& config);
std::vector<SpectrumScan> run_spectrum_scan(const RunConfig& config);

/// Runs task(i) for i in [0, count) on up to `workers` threads. Exceptions
/// are rethrown on the caller (first by index).
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

}  // namespace qbattery
