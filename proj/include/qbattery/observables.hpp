#pragma once

// Reduced density matrices and the charging figures of merit of the ion chain:
// energy, charging energy, ergotropy, von Neumann entropy (bits), site
// populations, magnetization and truncation leakage.

#include <vector>

#include <Eigen/Dense>

#include "qbattery/hilbert.hpp"

namespace qbattery {

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kNegativityTolerance = 1e-10;
inline constexpr double kEntropyFloor = 1e-12;
inline constexpr double kErgotropyTolerance = 1e-9;

/// Validated density matrix; eigenvalues are computed once at construction.
class DensityMatrix {
 public:
  /// Throws NumericalError unless trace = 1 (1e-10), Hermitian (1e-12) and
  /// every eigenvalue >= -1e-10.
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix pure(const Vector& psi);

  Index dim() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  /// Ascending.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  Eigen::MatrixXcd entries_;
  Eigen::VectorXd eigenvalues_;
};

enum class Subsystem { ions, boson };

DensityMatrix partial_trace(const PureState& psi, const HilbertSpec& spec, Subsystem keep);

/// <psi| op |psi>, imaginary part discarded after a 1e-8 consistency check.
double expectation(const Operator& op, const PureState& psi);

/// Tr[H_a rho_a].
double ion_energy(const DensityMatrix& rho, const Operator& h_spin);

inline double charging_energy(double energy_t, double energy_0) { return energy_t - energy_0; }

/// sum_k r_k e_k with r descending and e ascending (the passive-state energy).
double passive_energy(const Eigen::VectorXd& populations, const Eigen::VectorXd& energies);

struct Ergotropy {
  double value = 0.0;  ///< Clamped to zero when raw lies in [-1e-9, 0).
  double raw = 0.0;
};

/// Tr[H rho] - passive energy. Throws NumericalError if raw < -1e-9.
Ergotropy ergotropy_detail(const DensityMatrix& rho, const Operator& h, const Eigen::VectorXd& h_spectrum);
double ergotropy(const DensityMatrix& rho, const Operator& h, const Eigen::VectorXd& h_spectrum);
double ergotropy(const DensityMatrix& rho, const Operator& h);

/// -sum r log2 r over eigenvalues above 1e-12.
double von_neumann_entropy(const DensityMatrix& rho);

/// sigma_n = Tr[rho_a s+_n s-_n] for n = 1..N.
std::vector<double> site_populations(const DensityMatrix& rho_a, const HilbertSpec& spec);

/// sigma_{m,n} = sigma_m - sigma_n for 1-based sites.
double population_difference(const std::vector<double>& sigma, std::size_t m, std::size_t n);

struct Magnetization {
  double m_z = 0.0;  ///< <S_z>/N
  double o_z = 0.0;  ///< <S_z^2>/N^2
};

Magnetization magnetization(const PureState& g, std::size_t n_ions);

/// Probability weight on the top Fock level.
double leakage(const PureState& psi, const HilbertSpec& spec);

}  // namespace qbattery
