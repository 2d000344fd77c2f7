#pragma once

// Dense Hermitian eigensolvers (LAPACK divide-and-conquer). Eigenvalues come
// back ascending; eigenvector columns are phase-fixed so that the largest
// magnitude component (lowest index on ties) is real and positive, making the
// returned vectors a deterministic function of the input.

#include <Eigen/Dense>

namespace qbattery::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a);
HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a);
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a);

}  // namespace qbattery::linalg
