#pragma once

// Dicke-Ising Hamiltonian of an ion chain coupled to one bosonic mode:
//
//   H   = H_c + H_a + H_ac
//   H_c = omega_c c^dag c
//   H_a = omega_a sum_n s+_n s-_n + sum_{n<m} C_nm sx_n sx_m,   C_nm = J / |z_m - z_n|^p
//   H_ac = lambda sum_n (c + c^dag) sx_n
//
// Units: hbar = 1, energies in units of omega_c.

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qbattery/hilbert.hpp"

namespace qbattery {

/// full: lambda (c + c^dag) sx.  rotating_only: lambda (c^dag s- + c s+).
enum class CouplingMode { full, rotating_only };
/// full: C sx sx.  excitation_conserving: C (s+ s- + s- s+).
enum class HoppingMode { full, excitation_conserving };

std::string_view to_string(CouplingMode mode);
std::string_view to_string(HoppingMode mode);

/// Scaled equilibrium positions of a five-ion chain.
std::vector<double> default_positions();

struct ModelParams {
  double omega_a = 1.0;
  double omega_c = 1.0;
  double lambda = 0.25;
  double j_hop = 0.2;
  double p_exp = 3.0;
  std::vector<double> positions = default_positions();
  CouplingMode coupling_mode = CouplingMode::full;
  HoppingMode hopping_mode = HoppingMode::full;

  std::size_t n_ions() const noexcept { return positions.size(); }

  /// Throws ParameterError on an empty or non-increasing chain or p_exp < 0.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Symmetric matrix with entry (m, n) = j_hop / |z_m - z_n|^p_exp off the
/// diagonal and zero on it.
Eigen::MatrixXd pair_coupling_matrix(const std::vector<double>& positions, double j_hop, double p_exp);

struct Hamiltonian {
  Operator h_a;
  Operator h_c;
  Operator h_ac;
  Operator h_total;
};

/// Ion-chain Hamiltonian H_a over the 2^N spin-only space.
Operator build_ion_hamiltonian(const ModelParams& params);

/// All terms over the full composite space; every operator is verified Hermitian.
Hamiltonian build_hamiltonian(const ModelParams& params, const HilbertSpec& spec);

/// N_exc = c^dag c + sum_n s+_n s-_n over the full space.
Operator excitation_number_operator(const HilbertSpec& spec);

/// P = exp(i pi N_exc), diagonal with entries +-1.
Operator parity_operator(const HilbertSpec& spec);

}  // namespace qbattery
