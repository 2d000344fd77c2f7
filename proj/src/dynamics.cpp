#include "qbattery/dynamics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qbattery/errors.hpp"
#include "qbattery/linalg.hpp"
#include "qbattery/observables.hpp"

namespace qbattery {

GroundState ground_state(const Operator& h_spin) {
  const Operator h = h_spin.is_hermitian() ? h_spin : h_spin.as_hermitian();
  const Index dim = h.dim();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw DimensionError("spin Hamiltonian dimension must be 2^N, got " + std::to_string(dim));
  }
  linalg::HermitianEigen eig = linalg::hermitian_eigen(h.dense());
  const double gap = eig.values[1] - eig.values[0];
  return GroundState{eig.values[0], PureState(eig.vectors.col(0)), gap < kDegeneracyTolerance, gap,
                     std::move(eig.values)};
}

SpectrumScan spectrum_scan(const ModelParams& params_template, const std::vector<double>& j_grid) {
  if (j_grid.empty()) throw ParameterError("spectrum scan needs a non-empty J grid");
  SpectrumScan scan;
  scan.mode = params_template.hopping_mode;
  scan.j_grid = j_grid;
  for (double j : j_grid) {
    ModelParams params = params_template;
    params.j_hop = j;
    GroundState gs = ground_state(build_ion_hamiltonian(params));
    const Magnetization mag = magnetization(gs.g, params.n_ions());
    scan.eigenvalues.push_back(std::move(gs.spectrum));
    scan.m_z.push_back(mag.m_z);
    scan.o_z.push_back(mag.o_z);
    scan.degenerate.push_back(gs.degenerate);
  }
  return scan;
}

BosonAmplitudes default_boson_amplitudes() { return {{10, std::sqrt(0.6)}, {15, std::sqrt(0.4)}}; }

PureState initial_state(const HilbertSpec& spec, const BosonAmplitudes& boson, const PureState& spin_state) {
  if (spin_state.dim() != spec.spin_dim()) throw DimensionError("spin state is not over the 2^N spin space");
  if (spin_state.norm_error() > kNormTolerance) throw NormalizationError("spin state is not normalized");
  double weight = 0.0;
  for (const auto& [level, amp] : boson) {
    if (level < 0 || level >= spec.fock_dim()) {
      throw IndexError("Fock level " + std::to_string(level) + " is outside the cutoff [0, " +
                       std::to_string(spec.fock_dim() - 1) + "]");
    }
    weight += std::norm(amp);
  }
  if (std::abs(weight - 1.0) > kNormTolerance) {
    throw NormalizationError("boson amplitudes have total weight " + std::to_string(weight));
  }
  Vector psi = Vector::Zero(spec.total_dim());
  for (const auto& [level, amp] : boson) {
    psi.segment(level * spec.spin_dim(), spec.spin_dim()) = amp * spin_state.amplitudes();
  }
  return PureState(std::move(psi));
}

std::string_view to_string(Method method) { return method == Method::dense_eig ? "dense" : "krylov"; }

Method default_method(Index dim) { return dim <= kDenseMethodMaxDim ? Method::dense_eig : Method::krylov; }

std::vector<double> time_grid(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw ParameterError("time grid needs dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = static_cast<double>(k) * dt;
  return grid;
}

EvolutionTrace simulate_charging(const ModelParams& params, const HilbertSpec& spec, const BosonAmplitudes& boson,
                                 std::span<const double> times, const ChargingOptions& options) {
  if (times.empty() || times.front() != 0.0) throw ParameterError("charging run must sample t = 0 first");

  const Hamiltonian ham = build_hamiltonian(params, spec);
  const Operator h_spin = build_ion_hamiltonian(params);
  const GroundState gs = ground_state(h_spin);
  const PureState psi0 = initial_state(spec, boson, gs.g);

  Eigen::VectorXd n_exc_diag(spec.total_dim());
  Eigen::VectorXd parity_diag(spec.total_dim());
  for (Index i = 0; i < spec.total_dim(); ++i) {
    const BasisIndex b = spec.decompose(i);
    const double n = static_cast<double>(b.fock) + std::popcount(b.spin);
    n_exc_diag[i] = n;
    parity_diag[i] = (static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0;
  }

  EvolutionTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.records.reserve(times.size());
  trace.e0 = gs.e0;
  trace.degenerate_ground = gs.degenerate;
  trace.method = options.propagation.method;
  trace.total_energy = expectation(ham.h_total, psi0);
  const double energy_scale = std::max(1.0, std::abs(trace.total_energy));

  double energy_initial = 0.0;
  auto consume = [&](std::size_t sample, double t, const PureState& psi) {
    const DensityMatrix rho_a = partial_trace(psi, spec, Subsystem::ions);
    const Eigen::VectorXd probabilities = psi.amplitudes().cwiseAbs2();

    EvolutionRecord rec;
    rec.t = t;
    rec.energy = ion_energy(rho_a, h_spin);
    if (sample == 0) energy_initial = rec.energy;
    rec.charging = charging_energy(rec.energy, energy_initial);
    const Ergotropy erg = ergotropy_detail(rho_a, h_spin, gs.spectrum);
    rec.ergotropy = erg.value;
    rec.ergotropy_raw = erg.raw;
    rec.entropy = von_neumann_entropy(rho_a);
    rec.entropy_boson = options.track_boson_entropy
                            ? von_neumann_entropy(partial_trace(psi, spec, Subsystem::boson))
                            : std::numeric_limits<double>::quiet_NaN();
    rec.sigma = site_populations(rho_a, spec);
    rec.n_exc = probabilities.dot(n_exc_diag);
    rec.parity = probabilities.dot(parity_diag);
    rec.leakage = leakage(psi, spec);
    rec.norm_error = psi.norm_error();
    rec.energy_drift = std::abs(expectation(ham.h_total, psi) - trace.total_energy) / energy_scale;

    trace.max_leakage = std::max(trace.max_leakage, rec.leakage);
    trace.max_norm_error = std::max(trace.max_norm_error, rec.norm_error);
    trace.max_energy_drift = std::max(trace.max_energy_drift, rec.energy_drift);
    trace.records.push_back(std::move(rec));
  };

  trace.stats = propagate(ham.h_total, psi0, times, options.propagation, consume);
  trace.leakage_warning = trace.max_leakage > options.leakage_warn;
  return trace;
}

}  // namespace qbattery
