#pragma once

// Composite Hilbert space of one truncated bosonic mode and N two-level ions,
// plus the sparse operator and pure-state types everything else is built on.
//
// Tensor ordering is fixed: boson (x) ion_1 (x) ... (x) ion_N. A basis index
// therefore decomposes as  index = fock * 2^N + spin,  and ion n occupies bit
// (N - n) of `spin` (ion 1 is the most significant bit). Each ion is ordered
// (ground, excited); a set bit means the ion is excited.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qbattery {

using Complex = std::complex<double>;
using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, Index>;
using Triplet = Eigen::Triplet<Complex, Index>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-10;

struct BasisIndex {
  Index fock = 0;
  std::uint64_t spin = 0;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

class HilbertSpec {
 public:
  /// Throws DimensionError unless n_ions >= 1 and fock_dim >= 2.
  HilbertSpec(std::size_t n_ions, Index fock_dim);

  std::size_t n_ions() const noexcept { return n_ions_; }
  Index fock_dim() const noexcept { return fock_dim_; }
  Index spin_dim() const noexcept { return Index{1} << n_ions_; }
  Index total_dim() const noexcept { return fock_dim_ * spin_dim(); }

  Index compose(BasisIndex b) const;
  BasisIndex decompose(Index index) const;

  /// Bit position of ion `site` (1-based) inside the spin index.
  std::size_t site_bit(std::size_t site) const;
  bool ion_excited(std::uint64_t spin, std::size_t site) const {
    return ((spin >> site_bit(site)) & 1U) != 0;
  }

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

 private:
  std::size_t n_ions_;
  Index fock_dim_;
};

/// Square sparse complex matrix. Immutable once built; the Hermitian flag is
/// only ever set after verification.
class Operator {
 public:
  Operator() = default;
  explicit Operator(SparseMatrix matrix);

  /// Duplicate coordinates are summed; exact zeros are pruned.
  static Operator from_triplets(Index dim, const std::vector<Triplet>& entries);
  static Operator identity(Index dim);
  static Operator diagonal(const Eigen::VectorXd& values);
  static Operator from_dense(const Eigen::MatrixXcd& dense);

  Index dim() const noexcept { return matrix_.rows(); }
  Index nnz() const noexcept { return matrix_.nonZeros(); }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  bool is_hermitian() const noexcept { return hermitian_; }

  /// Returns a copy flagged Hermitian; throws NumericalError when
  /// max |A - A^dagger| exceeds kHermitianTolerance.
  Operator as_hermitian() const;

  /// max |A - A^dagger| over all entries.
  double hermiticity_defect() const;
  /// True when every stored entry has zero imaginary part.
  bool is_real() const;
  double max_abs() const;
  /// Max absolute column sum.
  double norm1() const;

  Operator adjoint() const;
  Vector apply(const Vector& v) const;
  Eigen::MatrixXcd dense() const;

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(Complex scale) const;
  friend Operator operator*(Complex scale, const Operator& op) { return op * scale; }

 private:
  void check_same_dim(const Operator& rhs) const;

  SparseMatrix matrix_;
  bool hermitian_ = false;
};

/// max |a - b| entrywise; dims must match.
double max_abs_diff(const Operator& a, const Operator& b);

/// Unit-norm state vector.
class PureState {
 public:
  /// Throws NormalizationError if | ||amplitudes|| - 1 | > norm_tolerance.
  explicit PureState(Vector amplitudes, double norm_tolerance = kNormTolerance);

  /// Unit vector along basis index `index` of a `dim`-dimensional space.
  static PureState basis(Index dim, Index index);

  Index dim() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  double norm_error() const { return std::abs(amplitudes_.norm() - 1.0); }

 private:
  Vector amplitudes_;
};

enum class SpinOp { x, y, z, raise, lower, population };

/// Truncated bosonic annihilator: <n-1| c |n> = sqrt(n).
Operator boson_annihilator(Index fock_dim);

/// Single-ion operator over the 2^N spin-only space.
Operator ion_operator(std::size_t n_ions, std::size_t site, SpinOp kind);

/// Single-ion operator embedded in the full composite space.
Operator spin_site_operator(const HilbertSpec& spec, std::size_t site, SpinOp kind);

/// Kronecker product a (x) b.
Operator tensor_embed(const Operator& a, const Operator& b);

}  // namespace qbattery
