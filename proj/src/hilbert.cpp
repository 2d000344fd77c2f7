#include "qbattery/hilbert.hpp"

#include <cmath>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

HilbertSpec::HilbertSpec(std::size_t n_ions, Index fock_dim) : n_ions_(n_ions), fock_dim_(fock_dim) {
  if (n_ions < 1 || n_ions > 20) {
    throw DimensionError("n_ions must lie in [1, 20], got " + std::to_string(n_ions));
  }
  if (fock_dim < 2) {
    throw DimensionError("fock_dim must be >= 2, got " + std::to_string(fock_dim));
  }
}

Index HilbertSpec::compose(BasisIndex b) const {
  if (b.fock < 0 || b.fock >= fock_dim_ || b.spin >= static_cast<std::uint64_t>(spin_dim())) {
    throw IndexError("basis index out of range");
  }
  return b.fock * spin_dim() + static_cast<Index>(b.spin);
}

BasisIndex HilbertSpec::decompose(Index index) const {
  if (index < 0 || index >= total_dim()) {
    throw IndexError("basis index " + std::to_string(index) + " out of range");
  }
  return {index / spin_dim(), static_cast<std::uint64_t>(index % spin_dim())};
}

std::size_t HilbertSpec::site_bit(std::size_t site) const {
  if (site < 1 || site > n_ions_) {
    throw IndexError("ion site " + std::to_string(site) + " outside [1, " + std::to_string(n_ions_) + "]");
  }
  return n_ions_ - site;
}

// ---------------------------------------------------------------------------

Operator::Operator(SparseMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("operator matrix must be square");
  }
  matrix_.prune(Complex{0.0, 0.0});
  matrix_.makeCompressed();
}

Operator Operator::from_triplets(Index dim, const std::vector<Triplet>& entries) {
  if (dim < 1) throw DimensionError("operator dimension must be positive");
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= dim || t.col() < 0 || t.col() >= dim) {
      throw IndexError("triplet coordinate outside operator dimension");
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return Operator(std::move(m));
}

Operator Operator::identity(Index dim) {
  SparseMatrix m(dim, dim);
  m.setIdentity();
  Operator op(std::move(m));
  op.hermitian_ = true;
  return op;
}

Operator Operator::diagonal(const Eigen::VectorXd& values) {
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(values.size()));
  for (Index i = 0; i < values.size(); ++i) entries.emplace_back(i, i, values[i]);
  Operator op = from_triplets(values.size(), entries);
  op.hermitian_ = true;
  return op;
}

Operator Operator::from_dense(const Eigen::MatrixXcd& dense) {
  if (dense.rows() != dense.cols()) throw DimensionError("operator matrix must be square");
  return Operator(SparseMatrix(dense.sparseView(Complex{1.0}, 0.0)));
}

Operator Operator::as_hermitian() const {
  const double defect = hermiticity_defect();
  if (defect > kHermitianTolerance) {
    throw NumericalError("operator is not Hermitian: max |A - A^dagger| = " + std::to_string(defect));
  }
  Operator copy = *this;
  copy.hermitian_ = true;
  return copy;
}

double Operator::hermiticity_defect() const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

bool Operator::is_real() const {
  const Complex* values = matrix_.valuePtr();
  for (Index k = 0; k < matrix_.nonZeros(); ++k) {
    if (values[k].imag() != 0.0) return false;
  }
  return true;
}

double Operator::max_abs() const {
  double worst = 0.0;
  const Complex* values = matrix_.valuePtr();
  for (Index k = 0; k < matrix_.nonZeros(); ++k) worst = std::max(worst, std::abs(values[k]));
  return worst;
}

double Operator::norm1() const {
  Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(dim());
  for (Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) col_sums[it.col()] += std::abs(it.value());
  }
  return dim() == 0 ? 0.0 : col_sums.maxCoeff();
}

Operator Operator::adjoint() const {
  Operator op(SparseMatrix(matrix_.adjoint()));
  op.hermitian_ = hermitian_;
  return op;
}

Vector Operator::apply(const Vector& v) const {
  if (v.size() != dim()) throw DimensionError("vector size does not match operator dimension");
  return matrix_ * v;
}

Eigen::MatrixXcd Operator::dense() const { return Eigen::MatrixXcd(matrix_); }

void Operator::check_same_dim(const Operator& rhs) const {
  if (dim() != rhs.dim()) {
    throw DimensionError("operator dimensions differ: " + std::to_string(dim()) + " vs " + std::to_string(rhs.dim()));
  }
}

Operator Operator::operator+(const Operator& rhs) const {
  check_same_dim(rhs);
  return Operator(SparseMatrix(matrix_ + rhs.matrix_));
}

Operator Operator::operator-(const Operator& rhs) const {
  check_same_dim(rhs);
  return Operator(SparseMatrix(matrix_ - rhs.matrix_));
}

Operator Operator::operator*(const Operator& rhs) const {
  check_same_dim(rhs);
  return Operator(SparseMatrix(matrix_ * rhs.matrix_));
}

Operator Operator::operator*(Complex scale) const { return Operator(SparseMatrix(matrix_ * scale)); }

double max_abs_diff(const Operator& a, const Operator& b) { return (a - b).max_abs(); }

// ---------------------------------------------------------------------------

PureState::PureState(Vector amplitudes, double norm_tolerance) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DimensionError("state must have positive dimension");
  if (!amplitudes_.allFinite()) throw NormalizationError("state contains non-finite amplitudes");
  const double err = norm_error();
  if (err > norm_tolerance) {
    throw NormalizationError("state norm deviates from 1 by " + std::to_string(err));
  }
}

PureState PureState::basis(Index dim, Index index) {
  if (index < 0 || index >= dim) throw IndexError("basis index outside state dimension");
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------

Operator boson_annihilator(Index fock_dim) {
  if (fock_dim < 2) throw DimensionError("fock_dim must be >= 2, got " + std::to_string(fock_dim));
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(fock_dim - 1));
  for (Index n = 1; n < fock_dim; ++n) entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  return Operator::from_triplets(fock_dim, entries);
}

namespace {

// Single-ion 2x2 element <row|op|col> in the (ground, excited) basis.
Complex ion_element(SpinOp kind, int row, int col) {
  using namespace std::complex_literals;
  switch (kind) {
    case SpinOp::x:
      return row != col ? 1.0 : 0.0;
    case SpinOp::y:
      if (row == 0 && col == 1) return 1i;
      if (row == 1 && col == 0) return -1i;
      return 0.0;
    case SpinOp::z:
      return row == col ? (row == 1 ? 1.0 : -1.0) : 0.0;
    case SpinOp::raise:
      return (row == 1 && col == 0) ? 1.0 : 0.0;
    case SpinOp::lower:
      return (row == 0 && col == 1) ? 1.0 : 0.0;
    case SpinOp::population:
      return (row == 1 && col == 1) ? 1.0 : 0.0;
  }
  return 0.0;
}

bool is_hermitian_kind(SpinOp kind) {
  return kind != SpinOp::raise && kind != SpinOp::lower;
}

}  // namespace

Operator ion_operator(std::size_t n_ions, std::size_t site, SpinOp kind) {
  // Validates n_ions and site; the fock cutoff is irrelevant here.
  const HilbertSpec spec(n_ions, 2);
  const std::size_t bit = spec.site_bit(site);
  const Index dim = spec.spin_dim();

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (Index col = 0; col < dim; ++col) {
    const int col_state = static_cast<int>((col >> bit) & 1);
    for (int row_state = 0; row_state < 2; ++row_state) {
      const Complex value = ion_element(kind, row_state, col_state);
      if (value == Complex{}) continue;
      const Index row = (col & ~(Index{1} << bit)) | (Index{row_state} << bit);
      entries.emplace_back(row, col, value);
    }
  }
  Operator op = Operator::from_triplets(dim, entries);
  return is_hermitian_kind(kind) ? op.as_hermitian() : op;
}

Operator spin_site_operator(const HilbertSpec& spec, std::size_t site, SpinOp kind) {
  return tensor_embed(Operator::identity(spec.fock_dim()), ion_operator(spec.n_ions(), site, kind));
}

Operator tensor_embed(const Operator& a, const Operator& b) {
  const SparseMatrix& am = a.matrix();
  const SparseMatrix& bm = b.matrix();
  const Index db = b.dim();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(a.nnz() * b.nnz()));
  for (Index ar = 0; ar < am.outerSize(); ++ar) {
    for (SparseMatrix::InnerIterator ia(am, ar); ia; ++ia) {
      for (Index br = 0; br < bm.outerSize(); ++br) {
        for (SparseMatrix::InnerIterator ib(bm, br); ib; ++ib) {
          entries.emplace_back(ia.row() * db + ib.row(), ia.col() * db + ib.col(), ia.value() * ib.value());
        }
      }
    }
  }
  Operator op = Operator::from_triplets(a.dim() * db, entries);
  return (a.is_hermitian() && b.is_hermitian()) ? op.as_hermitian() : op;
}

}  // namespace qbattery
