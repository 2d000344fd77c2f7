// Unitary propagation psi(t) = exp(-i H t) psi0.
//
// dense_eig: H is split into the connected components of its sparsity graph
// (for the Dicke-Ising model these are the excitation-parity sectors, or the
// excitation-number sectors under the rotating-wave approximation). Each
// component that the initial state touches is diagonalized exactly and the
// phases are applied per sample in batched products.
//
// krylov: Hermitian Lanczos with full re-orthogonalization. From the current
// state a basis V_k and tridiagonal T_k are built once and reused for every
// sample the basis can reach. A step tau is accepted when the defect bound
//
//   err(tau) = beta0 * beta_k * int_0^tau |e_k^T exp(-i s T_k) e_1| ds
//
// (the exact error is bounded by the integrated residual since the true
// propagator is unitary) satisfies err(tau) <= kSafety * tol * tau. The
// safety factor keeps the accumulated bound below tol for horizons up to
// 1 / kSafety.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qbattery/dynamics.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/linalg.hpp"

namespace qbattery {

namespace {

constexpr Index kTimeChunk = 64;
constexpr double kSafety = 0.1;

void check_times(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0) throw ParameterError("sample times must be finite and >= 0");
    if (k > 0 && !(times[k] > times[k - 1])) throw ParameterError("sample times must be strictly increasing");
  }
}

PureState as_state(Vector v) { return PureState(std::move(v), kPropagationNormTolerance); }

// Connected components of the sparsity graph, each listed in ascending index
// order, components ordered by their smallest index.
std::vector<std::vector<Index>> connected_components(const SparseMatrix& h) {
  const Index n = h.rows();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Index row = 0; row < h.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(h, row); it; ++it) {
      const Index a = find(it.row());
      const Index b = find(it.col());
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::vector<std::vector<Index>> components;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    auto& s = slot[static_cast<std::size_t>(root)];
    if (s < 0) {
      s = static_cast<Index>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(s)].push_back(i);
  }
  return components;
}

struct EigenBlock {
  std::vector<Index> indices;
  Eigen::VectorXd energies;
  Eigen::MatrixXd real_vectors;
  Eigen::MatrixXcd complex_vectors;
  Vector coefficients;  // V^dagger psi0 restricted to the block
};

PropagationStats propagate_dense(const Operator& h, const PureState& psi0, std::span<const double> times,
                                 const StateConsumer& consume) {
  const SparseMatrix& m = h.matrix();
  const bool real = h.is_real();
  const Vector& psi = psi0.amplitudes();

  std::vector<EigenBlock> blocks;
  std::vector<Index> local(static_cast<std::size_t>(h.dim()), -1);
  for (auto& component : connected_components(m)) {
    bool touched = false;
    for (Index i : component) touched = touched || psi[i] != Complex{};
    if (!touched) continue;

    const auto size = static_cast<Index>(component.size());
    for (Index k = 0; k < size; ++k) local[static_cast<std::size_t>(component[static_cast<std::size_t>(k)])] = k;
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(size, size);
    for (Index k = 0; k < size; ++k) {
      for (SparseMatrix::InnerIterator it(m, component[static_cast<std::size_t>(k)]); it; ++it) {
        dense(k, local[static_cast<std::size_t>(it.col())]) = it.value();
      }
    }
    Vector restricted(size);
    for (Index k = 0; k < size; ++k) restricted[k] = psi[component[static_cast<std::size_t>(k)]];

    EigenBlock block;
    block.indices = std::move(component);
    if (real) {
      linalg::SymmetricEigen eig = linalg::symmetric_eigen(dense.real());
      block.energies = std::move(eig.values);
      block.real_vectors = std::move(eig.vectors);
      block.coefficients = block.real_vectors.transpose() * restricted;
    } else {
      linalg::HermitianEigen eig = linalg::hermitian_eigen(dense);
      block.energies = std::move(eig.values);
      block.complex_vectors = std::move(eig.vectors);
      block.coefficients = block.complex_vectors.adjoint() * restricted;
    }
    blocks.push_back(std::move(block));
  }

  PropagationStats stats;
  stats.dense_blocks = blocks.size();

  const auto n_times = static_cast<Index>(times.size());
  for (Index start = 0; start < n_times; start += kTimeChunk) {
    const Index width = std::min(kTimeChunk, n_times - start);
    Eigen::MatrixXcd states = Eigen::MatrixXcd::Zero(h.dim(), width);
    for (const EigenBlock& block : blocks) {
      const Index size = block.energies.size();
      Eigen::MatrixXcd phased(size, width);
      for (Index j = 0; j < width; ++j) {
        const double t = times[static_cast<std::size_t>(start + j)];
        for (Index k = 0; k < size; ++k) {
          phased(k, j) = std::polar(1.0, -block.energies[k] * t) * block.coefficients[k];
        }
      }
      Eigen::MatrixXcd evolved(size, width);
      if (real) {
        evolved.real() = block.real_vectors * phased.real();
        evolved.imag() = block.real_vectors * phased.imag();
      } else {
        evolved = block.complex_vectors * phased;
      }
      for (Index k = 0; k < size; ++k) states.row(block.indices[static_cast<std::size_t>(k)]) = evolved.row(k);
    }
    for (Index j = 0; j < width; ++j) {
      const auto sample = static_cast<std::size_t>(start + j);
      consume(sample, times[sample], as_state(states.col(j)));
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------

class KrylovStepper {
 public:
  KrylovStepper(const SparseMatrix& h, int krylov_dim, double breakdown_tol)
      : h_(h), max_dim_(std::max<Index>(1, std::min<Index>(krylov_dim, h.rows()))), breakdown_tol_(breakdown_tol) {}

  void build(const Vector& start) {
    const Index n = h_.rows();
    beta0_ = start.norm();
    basis_.resize(n, max_dim_);
    alpha_.resize(max_dim_);
    beta_.resize(max_dim_);
    basis_.col(0) = start / beta0_;
    invariant_ = false;
    dim_ = max_dim_;
    residual_ = 0.0;

    Vector w(n);
    for (Index j = 0; j < max_dim_; ++j) {
      w.noalias() = h_ * basis_.col(j);
      alpha_[j] = basis_.col(j).dot(w).real();
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Vector overlaps = basis_.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis_.leftCols(j + 1) * overlaps;
      }
      const double next = w.norm();
      if (next <= breakdown_tol_) {
        invariant_ = true;
        dim_ = j + 1;
        break;
      }
      if (j + 1 == max_dim_) {
        residual_ = next;
        break;
      }
      beta_[j] = next;
      basis_.col(j + 1) = w / next;
    }

    // T = Q diag(lambda) Q^T; only the first row of Q is needed for e_1.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim_, dim_);
    for (Index j = 0; j < dim_; ++j) {
      t(j, j) = alpha_[j];
      if (j + 1 < dim_) t(j, j + 1) = t(j + 1, j) = beta_[j];
    }
    linalg::SymmetricEigen eig = linalg::symmetric_eigen(t);
    ritz_ = std::move(eig.values);
    q_ = std::move(eig.vectors);
    q_first_ = q_.row(0).transpose();
  }

  bool invariant() const { return invariant_; }

  /// exp(-i tau T) e_1 in the Krylov basis.
  Vector small_propagator(double tau) const {
    Vector phased(dim_);
    for (Index k = 0; k < dim_; ++k) phased[k] = std::polar(1.0, -ritz_[k] * tau) * q_first_[k];
    return q_ * phased;
  }

  Vector state_at(double tau) const { return beta0_ * (basis_.leftCols(dim_) * small_propagator(tau)); }

  /// Integrated-residual bound on ||exp(-i tau H) v - approximation||.
  double error_bound(double tau) const {
    if (invariant_ || tau <= 0.0) return 0.0;
    const double spread = ritz_.maxCoeff() - ritz_.minCoeff();
    const double oscillations = spread * tau / (2.0 * M_PI);
    Index intervals = static_cast<Index>(std::ceil(8.0 * oscillations)) + 16;
    intervals = std::min<Index>(intervals + (intervals % 2), 4096);
    const double h = tau / static_cast<double>(intervals);
    double integral = 0.0;
    for (Index i = 0; i <= intervals; ++i) {
      const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      integral += weight * last_component(h * static_cast<double>(i));
    }
    integral *= h / 3.0;
    return beta0_ * residual_ * integral;
  }

 private:
  double last_component(double s) const {
    Complex acc{0.0, 0.0};
    for (Index k = 0; k < dim_; ++k) acc += q_(dim_ - 1, k) * std::polar(1.0, -ritz_[k] * s) * q_first_[k];
    return std::abs(acc);
  }

  const SparseMatrix& h_;
  Index max_dim_;
  double breakdown_tol_;
  Index dim_ = 0;
  double beta0_ = 0.0;
  double residual_ = 0.0;
  bool invariant_ = false;
  Eigen::MatrixXcd basis_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd ritz_;
  Eigen::MatrixXd q_;
  Eigen::VectorXd q_first_;
};

PropagationStats propagate_krylov(const Operator& h, const PureState& psi0, std::span<const double> times,
                                  const PropagationOptions& options, const StateConsumer& consume) {
  if (!(options.tol > 0.0)) throw ParameterError("Krylov tolerance must be positive");
  if (options.krylov_dim < 2) throw ParameterError("Krylov dimension must be >= 2");

  PropagationStats stats;
  const double scale = std::max(1.0, h.norm1());
  KrylovStepper stepper(h.matrix(), options.krylov_dim, 1e-12 * scale);

  Vector current = psi0.amplitudes();
  double t_now = 0.0;
  std::size_t next = 0;
  const double tau_floor = 1e-13 / scale;

  while (next < times.size()) {
    if (times[next] == t_now) {
      consume(next, times[next], as_state(current));
      ++next;
      continue;
    }
    stepper.build(current);
    ++stats.krylov_builds;

    // Emit every sample this basis can reach within tolerance.
    double reached = 0.0;
    Vector last;
    while (next < times.size()) {
      const double tau = times[next] - t_now;
      const double err = stepper.error_bound(tau);
      if (!stepper.invariant() && err > kSafety * options.tol * tau) break;
      last = stepper.state_at(tau);
      consume(next, times[next], as_state(last));
      reached = tau;
      stats.error_bound += err;
      ++stats.substeps;
      ++next;
    }
    if (reached > 0.0) {
      // Restart from the last emitted sample; its time is exact.
      t_now = times[next - 1];
      current = std::move(last);
      continue;
    }

    // The next sample is out of reach: take the largest admissible substep.
    const double target = times[next] - t_now;
    auto admissible = [&](double tau) { return stepper.error_bound(tau) <= kSafety * options.tol * tau; };
    double good = target;
    while (!admissible(good)) {
      good *= 0.5;
      if (good < tau_floor) {
        throw NumericalError("Krylov substep underflow at t = " + std::to_string(t_now));
      }
    }
    double bad = std::min(2.0 * good, target);
    for (int it = 0; it < 20 && bad - good > 1e-3 * good; ++it) {
      const double mid = 0.5 * (good + bad);
      (admissible(mid) ? good : bad) = mid;
    }
    stats.error_bound += stepper.error_bound(good);
    ++stats.substeps;
    current = stepper.state_at(good);
    t_now += good;
  }
  return stats;
}

}  // namespace

PropagationStats propagate(const Operator& h, const PureState& psi0, std::span<const double> times,
                           const PropagationOptions& options, const StateConsumer& consume) {
  if (h.dim() != psi0.dim()) throw DimensionError("Hamiltonian and state dimensions differ");
  if (!h.is_hermitian()) (void)h.as_hermitian();
  check_times(times);
  if (times.empty()) return {};
  switch (options.method) {
    case Method::dense_eig:
      return propagate_dense(h, psi0, times, consume);
    case Method::krylov:
      return propagate_krylov(h, psi0, times, options, consume);
  }
  return {};
}

}  // namespace qbattery
