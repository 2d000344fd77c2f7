#pragma once

// Test-only reference computations. These deliberately avoid the library's
// own numerical paths: dense Kronecker products are formed elementwise,
// eigen-decompositions use Eigen's solver rather than LAPACK, and passive
// energies are found by enumerating every pairing.

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// min over all permutations pi of sum_k r[pi(k)] e[k].
inline double brute_force_passive_energy(const std::vector<double>& r, const std::vector<double>& e) {
  std::vector<std::size_t> perm(r.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) total += r[perm[k]] * e[k];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = random_complex(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

/// G G^dagger / Tr, exactly Hermitian.
inline Eigen::MatrixXcd random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = random_complex(dim, dim, rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::VectorXcd v = random_complex(dim, 1, rng);
  return v / v.norm();
}

/// exp(-i H t) psi through Eigen's self-adjoint solver on the dense matrix.
inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd c = es.eigenvectors().adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -es.eigenvalues()[k] * t);
  return es.eigenvectors() * c;
}

/// Matrix of the permutation that reverses the ion chain (ion n <-> ion N+1-n)
/// on boson (x) ion_1 (x) ... (x) ion_N.
inline Eigen::MatrixXd chain_reversal(Eigen::Index fock_dim, int n_ions) {
  const Eigen::Index spin_dim = Eigen::Index{1} << n_ions;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(fock_dim * spin_dim, fock_dim * spin_dim);
  for (Eigen::Index f = 0; f < fock_dim; ++f) {
    for (Eigen::Index s = 0; s < spin_dim; ++s) {
      Eigen::Index r = 0;
      for (int b = 0; b < n_ions; ++b)
        if ((s >> b) & 1) r |= Eigen::Index{1} << (n_ions - 1 - b);
      p(f * spin_dim + r, f * spin_dim + s) = 1.0;
    }
  }
  return p;
}

}  // namespace oracle
