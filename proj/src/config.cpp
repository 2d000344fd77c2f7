#include "qbattery/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qbattery/errors.hpp"
#include "qbattery/output.hpp"

namespace qbattery {

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::none: return "none";
    case SweepParam::lambda: return "lambda";
    case SweepParam::j_hop: return "j_hop";
    case SweepParam::p_exp: return "p_exp";
  }
  return "none";
}

std::string_view to_string(Reduction r) { return r == Reduction::trace ? "trace" : "max_over_window"; }

std::string_view to_string(MethodChoice m) {
  switch (m) {
    case MethodChoice::automatic: return "auto";
    case MethodChoice::dense: return "dense";
    case MethodChoice::krylov: return "krylov";
  }
  return "auto";
}

std::string_view to_string(SpectrumModes m) {
  switch (m) {
    case SpectrumModes::both: return "both";
    case SpectrumModes::full: return "full";
    case SpectrumModes::excitation_conserving: return "excitation_conserving";
  }
  return "both";
}

Method RunConfig::resolved_method() const {
  switch (method) {
    case MethodChoice::dense: return Method::dense_eig;
    case MethodChoice::krylov: return Method::krylov;
    case MethodChoice::automatic: break;
  }
  return default_method(fock_dim * (Index{1} << model.n_ions()));
}

PropagationOptions RunConfig::propagation() const { return {resolved_method(), tol, krylov_dim}; }

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& key, std::string_view token) {
  const std::string t = trim(token);
  if (t.rfind("sqrt(", 0) == 0 && t.size() > 6 && t.back() == ')') {
    const double inner = parse_number(key, std::string_view(t).substr(5, t.size() - 6));
    if (inner < 0.0) throw ConfigError(key, "sqrt of a negative number");
    return std::sqrt(inner);
  }
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError(key, "expected a real number, got '" + t + "'");
  }
  return value;
}

long long parse_integer(const std::string& key, std::string_view token) {
  const std::string t = trim(token);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, std::string_view token) {
  const std::string t = trim(token);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError(key, "expected a boolean, got '" + t + "'");
}

std::vector<std::string> split_list(std::string_view raw) {
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') return {s};
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> items;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) items.push_back(trim(item));
  if (items.size() == 1 && items.front().empty()) items.clear();
  return items;
}

std::vector<double> parse_number_list(const std::string& key, std::string_view raw) {
  std::vector<double> out;
  for (const auto& item : split_list(raw)) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError(key, "list must not be empty");
  return out;
}

template <typename Enum>
Enum parse_enum(const std::string& key, std::string_view raw, std::initializer_list<Enum> choices) {
  const std::string t = trim(raw);
  std::string allowed;
  for (Enum e : choices) {
    if (to_string(e) == t) return e;
    allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
  }
  throw ConfigError(key, "expected one of {" + allowed + "}, got '" + t + "'");
}

BosonAmplitudes parse_boson(const std::string& key, std::string_view raw) {
  BosonAmplitudes out;
  for (const auto& item : split_list(raw)) {
    std::vector<std::string> parts;
    std::stringstream stream(item);
    std::string part;
    while (std::getline(stream, part, ':')) parts.push_back(part);
    if (parts.size() != 2 && parts.size() != 3) {
      throw ConfigError(key, "expected 'level:amplitude' or 'level:re:im', got '" + item + "'");
    }
    const long long level = parse_integer(key, parts[0]);
    const double re = parse_number(key, parts[1]);
    const double im = parts.size() == 3 ? parse_number(key, parts[2]) : 0.0;
    if (!out.emplace(static_cast<Index>(level), Complex{re, im}).second) {
      throw ConfigError(key, "Fock level " + std::to_string(level) + " listed twice");
    }
  }
  if (out.empty()) throw ConfigError(key, "at least one Fock level is required");
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (double v : values) out += (out.empty() ? "" : ", ") + format_double(v);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"omega_a", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.omega_a = parse_number(k, v); }},
      {"omega_c", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.omega_c = parse_number(k, v); }},
      {"lambda", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.lambda = parse_number(k, v); }},
      {"j_hop", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.j_hop = parse_number(k, v); }},
      {"p_exp", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.p_exp = parse_number(k, v); }},
      {"positions",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.positions = parse_number_list(k, v); }},
      {"coupling_mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.coupling_mode = parse_enum(k, v, {CouplingMode::full, CouplingMode::rotating_only});
       }},
      {"hopping_mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.hopping_mode = parse_enum(k, v, {HoppingMode::full, HoppingMode::excitation_conserving});
       }},
      {"fock_dim",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.fock_dim = static_cast<Index>(parse_integer(k, v)); }},
      {"boson_state", [](RunConfig& c, const std::string& k, const std::string& v) { c.boson = parse_boson(k, v); }},
      {"t_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_max = parse_number(k, v); }},
      {"dt", [](RunConfig& c, const std::string& k, const std::string& v) { c.dt = parse_number(k, v); }},
      {"method",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.method = parse_enum(k, v, {MethodChoice::automatic, MethodChoice::dense, MethodChoice::krylov});
       }},
      {"tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.tol = parse_number(k, v); }},
      {"krylov_dim",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.krylov_dim = static_cast<int>(parse_integer(k, v)); }},
      {"sweep_param",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.param = parse_enum(k, v, {SweepParam::none, SweepParam::lambda, SweepParam::j_hop, SweepParam::p_exp});
       }},
      {"sweep_values",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep.values = parse_number_list(k, v); }},
      {"sweep_range",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto r = parse_number_list(k, v);
         if (r.size() != 3) throw ConfigError(k, "expected 'start, stop, step'");
         if (!(r[2] > 0.0) || r[1] < r[0]) throw ConfigError(k, "need step > 0 and stop >= start");
         const auto n = static_cast<long long>(std::floor((r[1] - r[0]) / r[2] + 1e-9));
         c.sweep.values.clear();
         // Grid points are rounded to 12 decimals so 0.05 * k prints as 0.15, not 0.15000000000000002.
         for (long long i = 0; i <= n; ++i) {
           c.sweep.values.push_back(std::round((r[0] + static_cast<double>(i) * r[2]) * 1e12) / 1e12);
         }
       }},
      {"sweep_reduction",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.reduction = parse_enum(k, v, {Reduction::trace, Reduction::max_over_window});
       }},
      {"window_start", [](RunConfig& c, const std::string& k, const std::string& v) { c.window_start = parse_number(k, v); }},
      {"window_end", [](RunConfig& c, const std::string& k, const std::string& v) { c.window_end = parse_number(k, v); }},
      {"spectrum_modes",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.spectrum_modes = parse_enum(
             k, v, {SpectrumModes::both, SpectrumModes::full, SpectrumModes::excitation_conserving});
       }},
      {"workers",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.workers = static_cast<int>(parse_integer(k, v)); }},
      {"leakage_warn", [](RunConfig& c, const std::string& k, const std::string& v) { c.leakage_warn = parse_number(k, v); }},
      {"track_boson_entropy",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.track_boson_entropy = parse_bool(k, v); }},
      {"output_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const ParameterError& e) {
    const std::string what = e.what();
    throw ConfigError(what.find("p_exp") != std::string::npos ? "p_exp" : "positions",
                      what + " (p_exp is expected in [0, 3])");
  }
  if (fock_dim < 2) throw ConfigError("fock_dim", "must be >= 2");
  if (model.n_ions() > 20) throw ConfigError("positions", "at most 20 ions are supported");
  if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(t_max > 0.0)) throw ConfigError("t_max", "must be > 0");
  if (!(tol > 0.0)) throw ConfigError("tol", "must be > 0");
  if (krylov_dim < 2) throw ConfigError("krylov_dim", "must be >= 2");
  if (workers < 1) throw ConfigError("workers", "must be >= 1");
  if (!(leakage_warn >= 0.0)) throw ConfigError("leakage_warn", "must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");

  double weight = 0.0;
  for (const auto& [level, amp] : boson) {
    if (level < 0 || level >= fock_dim) {
      throw ConfigError("boson_state", "Fock level " + std::to_string(level) + " outside [0, fock_dim)");
    }
    weight += std::norm(amp);
  }
  if (std::abs(weight - 1.0) > kNormTolerance) {
    throw ConfigError("boson_state", "amplitudes must be normalized, total weight is " + format_double(weight));
  }

  if (!(window_start >= 0.0) || !(window_end > window_start)) {
    throw ConfigError("window_end", "window must satisfy 0 <= window_start < window_end");
  }
  if (window_end > t_max + 1e-12) throw ConfigError("window_end", "window exceeds the simulated range t_max");

  if (sweep.param == SweepParam::none && !sweep.values.empty()) {
    throw ConfigError("sweep_values", "grid given but sweep_param = none");
  }
  if (sweep.param != SweepParam::none && sweep.values.empty()) {
    throw ConfigError("sweep_values", "sweep needs a non-empty grid (sweep_values or sweep_range)");
  }
  for (double v : sweep.values) {
    if (sweep.param == SweepParam::p_exp && v < 0.0) throw ConfigError("sweep_values", "p_exp grid values must be >= 0");
  }
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::set<std::string> seen;
  std::stringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(content, "expected 'key = value'");
    std::string key = trim(std::string_view(content).substr(0, eq));
    if (key.empty()) throw ConfigError(content, "missing key before '='");
    if (!seen.insert(key).second) throw ConfigError(key, "key given more than once");
    out.emplace_back(std::move(key), trim(std::string_view(content).substr(eq + 1)));
  }
  return out;
}

RunConfig parse_config(std::string_view text, const KeyValues& overrides) {
  std::vector<std::pair<std::string, std::string>> entries = parse_key_values(text);
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
    if (it != entries.end()) {
      it->second = value;
    } else {
      entries.emplace_back(key, value);
    }
  }
  // sweep_values and sweep_range both define the grid.
  const auto has = [&](std::string_view key) {
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
  };
  if (has("sweep_values") && has("sweep_range")) {
    throw ConfigError("sweep_range", "give either sweep_values or sweep_range, not both");
  }

  RunConfig config;
  const auto& table = setters();
  for (const auto& [key, value] : entries) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown key");
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

KeyValues to_key_values(const RunConfig& c) {
  std::string boson;
  for (const auto& [level, amp] : c.boson) {
    boson += (boson.empty() ? "" : ", ") + std::to_string(level) + ":" + format_double(amp.real());
    if (amp.imag() != 0.0) boson += ":" + format_double(amp.imag());
  }
  KeyValues out = {
      {"omega_a", format_double(c.model.omega_a)},
      {"omega_c", format_double(c.model.omega_c)},
      {"lambda", format_double(c.model.lambda)},
      {"j_hop", format_double(c.model.j_hop)},
      {"p_exp", format_double(c.model.p_exp)},
      {"positions", join_numbers(c.model.positions)},
      {"coupling_mode", std::string(to_string(c.model.coupling_mode))},
      {"hopping_mode", std::string(to_string(c.model.hopping_mode))},
      {"fock_dim", std::to_string(c.fock_dim)},
      {"boson_state", boson},
      {"t_max", format_double(c.t_max)},
      {"dt", format_double(c.dt)},
      {"method", std::string(to_string(c.method))},
      {"tol", format_double(c.tol)},
      {"krylov_dim", std::to_string(c.krylov_dim)},
      {"sweep_param", std::string(to_string(c.sweep.param))},
  };
  if (!c.sweep.values.empty()) out.emplace_back("sweep_values", join_numbers(c.sweep.values));
  KeyValues tail = {
      {"sweep_reduction", std::string(to_string(c.sweep.reduction))},
      {"window_start", format_double(c.window_start)},
      {"window_end", format_double(c.window_end)},
      {"spectrum_modes", std::string(to_string(c.spectrum_modes))},
      {"workers", std::to_string(c.workers)},
      {"leakage_warn", format_double(c.leakage_warn)},
      {"track_boson_entropy", c.track_boson_entropy ? "true" : "false"},
      {"output_dir", c.output_dir},
  };
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::string to_config_text(const RunConfig& config) {
  std::string text;
  for (const auto& [key, value] : to_key_values(config)) text += key + " = " + value + "\n";
  return text;
}

ModelParams with_sweep_value(ModelParams model, SweepParam param, double value) {
  switch (param) {
    case SweepParam::lambda: model.lambda = value; break;
    case SweepParam::j_hop: model.j_hop = value; break;
    case SweepParam::p_exp: model.p_exp = value; break;
    case SweepParam::none: break;
  }
  return model;
}

}  // namespace qbattery
