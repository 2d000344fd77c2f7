#include "qbattery/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qbattery/errors.hpp"
#include "qbattery/linalg.hpp"

namespace qbattery {

namespace {

constexpr double kImaginaryResidueTolerance = 1e-8;

double checked_real(Complex value, const char* what) {
  if (std::abs(value.imag()) > kImaginaryResidueTolerance * std::max(1.0, std::abs(value.real()))) {
    throw NumericalError(std::string(what) + " has imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

using RowMajorMap = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("density matrix must be square and non-empty");
  }
  const double defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > kHermitianTolerance) {
    throw NumericalError("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Complex trace = entries_.trace();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(std::abs(trace - 1.0)));
  }
  eigenvalues_ = linalg::hermitian_eigenvalues(entries_);
  if (eigenvalues_[0] < -kNegativityTolerance) {
    throw NumericalError("density matrix has negative eigenvalue " + std::to_string(eigenvalues_[0]));
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const PureState& psi, const HilbertSpec& spec, Subsystem keep) {
  if (psi.dim() != spec.total_dim()) {
    throw DimensionError("state dimension " + std::to_string(psi.dim()) + " does not match Hilbert space " +
                         std::to_string(spec.total_dim()));
  }
  // Row f, column s holds the amplitude of |f> (x) |s>.
  const RowMajorMap m(psi.amplitudes().data(), spec.fock_dim(), spec.spin_dim());
  Eigen::MatrixXcd rho;
  if (keep == Subsystem::ions) {
    rho = m.transpose() * m.conjugate();
  } else {
    rho = m * m.adjoint();
  }
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix(std::move(rho));
}

double expectation(const Operator& op, const PureState& psi) {
  if (op.dim() != psi.dim()) throw DimensionError("operator and state dimensions differ");
  return checked_real(psi.amplitudes().dot(op.apply(psi.amplitudes())), "expectation value");
}

double ion_energy(const DensityMatrix& rho, const Operator& h_spin) {
  if (rho.dim() != h_spin.dim()) throw DimensionError("density matrix and Hamiltonian dimensions differ");
  const SparseMatrix& h = h_spin.matrix();
  const Eigen::MatrixXcd& r = rho.entries();
  Complex total{0.0, 0.0};
  for (Index row = 0; row < h.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(h, row); it; ++it) total += it.value() * r(it.col(), it.row());
  }
  return checked_real(total, "ion energy");
}

double passive_energy(const Eigen::VectorXd& populations, const Eigen::VectorXd& energies) {
  if (populations.size() != energies.size()) throw DimensionError("population and energy counts differ");
  std::vector<double> r(populations.data(), populations.data() + populations.size());
  std::vector<double> e(energies.data(), energies.data() + energies.size());
  std::sort(r.begin(), r.end(), std::greater<>());
  std::sort(e.begin(), e.end());
  double total = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) total += r[k] * e[k];
  return total;
}

Ergotropy ergotropy_detail(const DensityMatrix& rho, const Operator& h, const Eigen::VectorXd& h_spectrum) {
  if (rho.dim() != h.dim() || h_spectrum.size() != h.dim()) {
    throw DimensionError("ergotropy inputs have mismatched dimensions");
  }
  if (!h.is_hermitian()) (void)h.as_hermitian();
  Ergotropy out;
  out.raw = ion_energy(rho, h) - passive_energy(rho.eigenvalues(), h_spectrum);
  if (out.raw < -kErgotropyTolerance) {
    throw NumericalError("ergotropy is negative beyond tolerance: " + std::to_string(out.raw));
  }
  out.value = std::max(out.raw, 0.0);
  return out;
}

double ergotropy(const DensityMatrix& rho, const Operator& h, const Eigen::VectorXd& h_spectrum) {
  return ergotropy_detail(rho, h, h_spectrum).value;
}

double ergotropy(const DensityMatrix& rho, const Operator& h) {
  return ergotropy(rho, h, linalg::hermitian_eigenvalues(h.dense()));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double r : rho.eigenvalues()) {
    if (r > kEntropyFloor) s -= r * std::log2(r);
  }
  return std::max(s, 0.0);
}

std::vector<double> site_populations(const DensityMatrix& rho_a, const HilbertSpec& spec) {
  if (rho_a.dim() != spec.spin_dim()) throw DimensionError("reduced density matrix is not over the spin space");
  std::vector<double> sigma(spec.n_ions(), 0.0);
  for (Index s = 0; s < spec.spin_dim(); ++s) {
    const double weight = rho_a.entries()(s, s).real();
    for (std::size_t site = 1; site <= spec.n_ions(); ++site) {
      if (spec.ion_excited(static_cast<std::uint64_t>(s), site)) sigma[site - 1] += weight;
    }
  }
  return sigma;
}

double population_difference(const std::vector<double>& sigma, std::size_t m, std::size_t n) {
  if (m < 1 || n < 1 || m > sigma.size() || n > sigma.size()) throw IndexError("ion site out of range");
  return sigma[m - 1] - sigma[n - 1];
}

Magnetization magnetization(const PureState& g, std::size_t n_ions) {
  const HilbertSpec spec(n_ions, 2);
  if (g.dim() != spec.spin_dim()) throw DimensionError("state is not over the spin space");
  const auto n = static_cast<double>(n_ions);
  Magnetization out;
  for (Index s = 0; s < g.dim(); ++s) {
    const double p = std::norm(g.amplitudes()[s]);
    const double sz = 2.0 * std::popcount(static_cast<std::uint64_t>(s)) - n;
    out.m_z += p * sz;
    out.o_z += p * sz * sz;
  }
  out.m_z /= n;
  out.o_z /= n * n;
  return out;
}

double leakage(const PureState& psi, const HilbertSpec& spec) {
  if (psi.dim() != spec.total_dim()) throw DimensionError("state does not match Hilbert space");
  const Index top = (spec.fock_dim() - 1) * spec.spin_dim();
  return psi.amplitudes().segment(top, spec.spin_dim()).squaredNorm();
}

}  // namespace qbattery
