#include "qbattery/linalg.hpp"

#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "qbattery/errors.hpp"

namespace qbattery::linalg {

namespace {

void check_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw DimensionError("eigensolver input must be square");
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw NumericalError(std::string(routine) + " failed with info = " + std::to_string(info));
  }
}

template <typename Matrix>
void fix_phases(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double mag = std::abs(vectors(r, c));
      // Tolerance keeps the choice stable against round-off between near-equal entries.
      if (mag > best + 1e-12) {
        best = mag;
        pivot = r;
      }
    }
    if (best <= 0.0) continue;
    const auto phase = vectors(pivot, c) / std::abs(vectors(pivot, c));
    vectors.col(c) /= phase;
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a) {
  check_square(a.rows(), a.cols());
  SymmetricEigen out;
  out.vectors = a;
  out.values.resize(a.rows());
  if (a.rows() == 0) return out;
  const auto n = static_cast<lapack_int>(a.rows());
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n, out.values.data()), "dsyevd");
  fix_phases(out.vectors);
  return out;
}

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a) {
  check_square(a.rows(), a.cols());
  HermitianEigen out;
  out.vectors = a;
  out.values.resize(a.rows());
  if (a.rows() == 0) return out;
  const auto n = static_cast<lapack_int>(a.rows());
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(),
                            n, out.values.data()),
             "zheevd");
  fix_phases(out.vectors);
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
  check_square(a.rows(), a.cols());
  Eigen::MatrixXcd work = a;
  Eigen::VectorXd values(a.rows());
  if (a.rows() == 0) return values;
  const auto n = static_cast<lapack_int>(a.rows());
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n,
                            values.data()),
             "zheevd");
  return values;
}

}  // namespace qbattery::linalg
