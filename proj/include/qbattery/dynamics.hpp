#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbattery/hilbert.hpp"
#include "qbattery/model.hpp"

namespace qbattery {

inline constexpr double kDegeneracyTolerance = 1e-9;
/// Norm budget for propagated states; drift is reported, never corrected.
inline constexpr double kPropagationNormTolerance = 1e-8;
/// Largest dimension for which dense_eig is the default method.
inline constexpr Index kDenseMethodMaxDim = 4096;

// --- spin-space spectrum ---------------------------------------------------

struct GroundState {
  double e0 = 0.0;
  PureState g;
  bool degenerate = false;
  double gap = 0.0;
  /// Full ascending spectrum of the input Hamiltonian.
  Eigen::VectorXd spectrum;
};

/// Dense diagonalization of a 2^N spin Hamiltonian. The returned vector is
/// the deterministic lowest-index eigenvector of the solver; `degenerate`
/// is set when the gap to the next level is below 1e-9.
GroundState ground_state(const Operator& h_spin);

struct SpectrumScan {
  HoppingMode mode = HoppingMode::full;
  std::vector<double> j_grid;
  std::vector<Eigen::VectorXd> eigenvalues;  ///< ascending, one per J
  std::vector<double> m_z;
  std::vector<double> o_z;
  std::vector<bool> degenerate;
};

/// Diagonalizes H_a for every J in the grid with all other parameters (and
/// the hopping mode) taken from `params_template`.
SpectrumScan spectrum_scan(const ModelParams& params_template, const std::vector<double>& j_grid);

// --- initial state -----------------------------------------------------------

/// Sparse Fock-level -> amplitude map.
using BosonAmplitudes = std::map<Index, Complex>;

/// sqrt(0.6)|10> + sqrt(0.4)|15>.
BosonAmplitudes default_boson_amplitudes();

/// |Phi>_boson (x) |spin_state>. Throws NormalizationError for
/// non-normalized inputs and IndexError for levels >= fock_dim.
PureState initial_state(const HilbertSpec& spec, const BosonAmplitudes& boson, const PureState& spin_state);

// --- propagation -------------------------------------------------------------

enum class Method { dense_eig, krylov };

std::string_view to_string(Method method);
Method default_method(Index dim);

struct PropagationOptions {
  Method method = Method::dense_eig;
  /// Krylov local error tolerance per unit time.
  double tol = 1e-8;
  int krylov_dim = 30;
};

struct PropagationStats {
  std::size_t krylov_builds = 0;
  std::size_t substeps = 0;       ///< accepted Krylov steps, emitting or not
  double error_bound = 0.0;       ///< accumulated Krylov defect bound
  std::size_t dense_blocks = 0;   ///< diagonalized components (dense_eig)
};

using StateConsumer = std::function<void(std::size_t sample, double time, const PureState& state)>;

/// psi(t_k) = exp(-i H t_k) psi0 for each t_k, streamed in order. `times`
/// must be non-negative and strictly increasing. Throws NumericalError for
/// non-Hermitian H or Krylov substep underflow.
PropagationStats propagate(const Operator& h, const PureState& psi0, std::span<const double> times,
                           const PropagationOptions& options, const StateConsumer& consume);

/// 0, dt, 2 dt, ..., t_max (t_max rounded to the nearest multiple of dt).
std::vector<double> time_grid(double t_max, double dt);

// --- charging run ------------------------------------------------------------

struct EvolutionRecord {
  double t = 0.0;
  double energy = 0.0;         ///< E = Tr[H_a rho_a]
  double charging = 0.0;       ///< E_c = E(t) - E(0)
  double ergotropy = 0.0;      ///< E_e (clamped)
  double ergotropy_raw = 0.0;
  double entropy = 0.0;        ///< S of rho_a, bits
  double entropy_boson = 0.0;  ///< S of rho_boson, NaN unless tracked
  std::vector<double> sigma;   ///< site populations
  double n_exc = 0.0;          ///< <c^dag c + sum s+ s->
  double parity = 0.0;         ///< <exp(i pi N_exc)>
  double leakage = 0.0;
  double norm_error = 0.0;
  double energy_drift = 0.0;   ///< |<H>(t) - <H>(0)| / max(1, |<H>(0)|)
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<EvolutionRecord> records;
  double e0 = 0.0;
  bool degenerate_ground = false;
  double total_energy = 0.0;  ///< <H>(0)
  double max_leakage = 0.0;
  double max_norm_error = 0.0;
  double max_energy_drift = 0.0;
  bool leakage_warning = false;
  Method method = Method::dense_eig;
  PropagationStats stats;
};

struct ChargingOptions {
  PropagationOptions propagation;
  double leakage_warn = 1e-6;
  bool track_boson_entropy = false;
};

/// Starts from |Phi>_boson (x) |g>_a with |g>_a the ground state of H_a and
/// evaluates every observable at each sample. `times` must start at 0.
EvolutionTrace simulate_charging(const ModelParams& params, const HilbertSpec& spec, const BosonAmplitudes& boson,
                                 std::span<const double> times, const ChargingOptions& options);

}  // namespace qbattery
