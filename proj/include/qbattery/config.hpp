#pragma once

// Flat key = value run configuration. Lines are `key = value`; `#` starts a
// comment; lists are comma separated and may be wrapped in brackets. Unknown
// keys, repeated keys, malformed values and invariant violations raise a
// ConfigError naming the key. The README carries the full key reference.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbattery/dynamics.hpp"
#include "qbattery/hilbert.hpp"
#include "qbattery/model.hpp"

namespace qbattery {

enum class SweepParam { none, lambda, j_hop, p_exp };
enum class Reduction { trace, max_over_window };
enum class MethodChoice { automatic, dense, krylov };
enum class SpectrumModes { both, full, excitation_conserving };

std::string_view to_string(SweepParam p);
std::string_view to_string(Reduction r);
std::string_view to_string(MethodChoice m);
std::string_view to_string(SpectrumModes m);

struct SweepConfig {
  SweepParam param = SweepParam::none;
  std::vector<double> values;
  Reduction reduction = Reduction::max_over_window;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunConfig {
  ModelParams model;
  Index fock_dim = 101;
  BosonAmplitudes boson = default_boson_amplitudes();
  double t_max = 40.0;
  double dt = 0.02;
  MethodChoice method = MethodChoice::automatic;
  double tol = 1e-8;
  int krylov_dim = 30;
  SweepConfig sweep;
  double window_start = 0.0;
  double window_end = 30.0;
  SpectrumModes spectrum_modes = SpectrumModes::both;
  int workers = 1;
  double leakage_warn = 1e-6;
  bool track_boson_entropy = false;
  std::string output_dir = "out";

  HilbertSpec spec() const { return HilbertSpec(model.n_ions(), fock_dim); }
  bool is_sweep() const noexcept { return sweep.param != SweepParam::none; }
  Method resolved_method() const;
  PropagationOptions propagation() const;

  /// Throws ConfigError naming the first key whose invariant fails.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Splits a document into ordered key/value pairs (no interpretation).
KeyValues parse_key_values(std::string_view text);

/// Parses, applies `overrides` (later wins), fills defaults and validates.
RunConfig parse_config(std::string_view text, const KeyValues& overrides = {});

/// Canonical key/value echo; parse_config(to_config_text(c)) == c.
KeyValues to_key_values(const RunConfig& config);
std::string to_config_text(const RunConfig& config);

/// Returns `model` with the swept parameter set to `value`.
ModelParams with_sweep_value(ModelParams model, SweepParam param, double value);

}  // namespace qbattery
