#include "qbattery/model.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

std::string_view to_string(CouplingMode mode) {
  return mode == CouplingMode::full ? "full" : "rotating_only";
}

std::string_view to_string(HoppingMode mode) {
  return mode == HoppingMode::full ? "full" : "excitation_conserving";
}

std::vector<double> default_positions() { return {-1.7429, -0.8221, 0.0, 0.8221, 1.7429}; }

void ModelParams::validate() const {
  if (positions.empty()) throw ParameterError("positions must list at least one ion");
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw ParameterError("positions must be strictly increasing (ion " + std::to_string(i + 1) + ")");
    }
  }
  if (!(p_exp >= 0.0)) throw ParameterError("p_exp must be >= 0");
  for (double v : {omega_a, omega_c, lambda, j_hop, p_exp}) {
    if (!std::isfinite(v)) throw ParameterError("model parameters must be finite");
  }
}

Eigen::MatrixXd pair_coupling_matrix(const std::vector<double>& positions, double j_hop, double p_exp) {
  if (p_exp < 0.0) throw ParameterError("p_exp must be >= 0");
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double distance = std::abs(positions[static_cast<std::size_t>(j)] - positions[static_cast<std::size_t>(i)]);
      if (p_exp > 0.0 && distance == 0.0) {
        throw ParameterError("ions " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                             " coincide; distance is singular for p_exp > 0");
      }
      const double value = p_exp == 0.0 ? j_hop : j_hop / std::pow(distance, p_exp);
      c(i, j) = value;
      c(j, i) = value;
    }
  }
  return c;
}

Operator build_ion_hamiltonian(const ModelParams& params) {
  params.validate();
  const std::size_t n = params.n_ions();
  const Index dim = Index{1} << n;
  const Eigen::MatrixXd coupling = pair_coupling_matrix(params.positions, params.j_hop, params.p_exp);

  std::vector<Operator> pop, raise, lower, sx;
  for (std::size_t site = 1; site <= n; ++site) {
    pop.push_back(ion_operator(n, site, SpinOp::population));
    raise.push_back(ion_operator(n, site, SpinOp::raise));
    lower.push_back(ion_operator(n, site, SpinOp::lower));
    sx.push_back(ion_operator(n, site, SpinOp::x));
  }

  Operator h(SparseMatrix(dim, dim));
  for (std::size_t i = 0; i < n; ++i) h = h + params.omega_a * pop[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c == 0.0) continue;
      if (params.hopping_mode == HoppingMode::full) {
        h = h + c * (sx[i] * sx[j]);
      } else {
        h = h + c * (raise[i] * lower[j] + lower[i] * raise[j]);
      }
    }
  }
  return h.as_hermitian();
}

Hamiltonian build_hamiltonian(const ModelParams& params, const HilbertSpec& spec) {
  params.validate();
  if (params.n_ions() != spec.n_ions()) {
    throw DimensionError("model has " + std::to_string(params.n_ions()) + " ions but Hilbert space has " +
                         std::to_string(spec.n_ions()));
  }
  const std::size_t n = spec.n_ions();
  const Operator id_boson = Operator::identity(spec.fock_dim());
  const Operator id_spin = Operator::identity(spec.spin_dim());
  const Operator c = boson_annihilator(spec.fock_dim());
  const Operator c_dag = c.adjoint();

  Hamiltonian out;
  out.h_a = tensor_embed(id_boson, build_ion_hamiltonian(params)).as_hermitian();
  out.h_c = tensor_embed((params.omega_c * (c_dag * c)).as_hermitian(), id_spin);

  Operator h_ac(SparseMatrix(spec.total_dim(), spec.total_dim()));
  if (params.lambda != 0.0) {
    if (params.coupling_mode == CouplingMode::full) {
      Operator sx_sum(SparseMatrix(spec.spin_dim(), spec.spin_dim()));
      for (std::size_t site = 1; site <= n; ++site) sx_sum = sx_sum + ion_operator(n, site, SpinOp::x);
      h_ac = params.lambda * tensor_embed(c + c_dag, sx_sum);
    } else {
      Operator lower_sum(SparseMatrix(spec.spin_dim(), spec.spin_dim()));
      Operator raise_sum(SparseMatrix(spec.spin_dim(), spec.spin_dim()));
      for (std::size_t site = 1; site <= n; ++site) {
        lower_sum = lower_sum + ion_operator(n, site, SpinOp::lower);
        raise_sum = raise_sum + ion_operator(n, site, SpinOp::raise);
      }
      h_ac = params.lambda * (tensor_embed(c_dag, lower_sum) + tensor_embed(c, raise_sum));
    }
  }
  out.h_ac = h_ac.as_hermitian();
  out.h_total = (out.h_c + out.h_a + out.h_ac).as_hermitian();
  return out;
}

Operator excitation_number_operator(const HilbertSpec& spec) {
  Eigen::VectorXd diag(spec.total_dim());
  for (Index i = 0; i < spec.total_dim(); ++i) {
    const BasisIndex b = spec.decompose(i);
    diag[i] = static_cast<double>(b.fock) + static_cast<double>(std::popcount(b.spin));
  }
  return Operator::diagonal(diag);
}

Operator parity_operator(const HilbertSpec& spec) {
  Eigen::VectorXd diag(spec.total_dim());
  for (Index i = 0; i < spec.total_dim(); ++i) {
    const BasisIndex b = spec.decompose(i);
    const auto excitations = static_cast<std::uint64_t>(b.fock) + static_cast<std::uint64_t>(std::popcount(b.spin));
    diag[i] = (excitations % 2 == 0) ? 1.0 : -1.0;
  }
  return Operator::diagonal(diag);
}

}  // namespace qbattery
