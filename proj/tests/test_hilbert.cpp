#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/hilbert.hpp"

using namespace qbattery;
using namespace std::complex_literals;

TEST_CASE("HilbertSpec validates and sizes the composite space") {
  const HilbertSpec spec(5, 101);
  CHECK(spec.spin_dim() == 32);
  CHECK(spec.total_dim() == 3232);
  CHECK_THROWS_AS(HilbertSpec(0, 10), DimensionError);
  CHECK_THROWS_AS(HilbertSpec(3, 1), DimensionError);
  CHECK_THROWS_AS(spec.decompose(3232), IndexError);
  CHECK_THROWS_AS(spec.site_bit(6), IndexError);
  // Ion 1 is the most significant spin bit.
  CHECK(spec.ion_excited(0b10000, 1));
  CHECK(spec.ion_excited(0b00001, 5));
}

TEST_CASE("basis index round-trips for randomized specs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const HilbertSpec spec(std::uniform_int_distribution<std::size_t>(1, 6)(rng),
                           std::uniform_int_distribution<Index>(2, 30)(rng));
    for (Index i = 0; i < spec.total_dim(); ++i) {
      const BasisIndex b = spec.decompose(i);
      REQUIRE(b.fock < spec.fock_dim());
      REQUIRE(spec.compose(b) == i);
    }
  }
}

TEST_CASE("boson annihilator") {
  SUBCASE("smallest ladder") {
    Eigen::MatrixXcd expected(2, 2);
    expected << 0, 1, 0, 0;
    CHECK(boson_annihilator(2).dense().isApprox(expected));
  }
  SUBCASE("ladder element <9|c|10>") {
    const Operator c = boson_annihilator(101);
    CHECK(c.matrix().coeff(9, 10).real() == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
    CHECK(c.matrix().coeff(9, 10).real() == doctest::Approx(3.16228).epsilon(1e-6));
    CHECK_FALSE(c.is_hermitian());
    CHECK(c.hermiticity_defect() > 1.0);
  }
  SUBCASE("number operator on |15>") {
    const Operator c = boson_annihilator(101);
    const Operator n = c.adjoint() * c;
    const Vector v = PureState::basis(101, 15).amplitudes();
    CHECK((n.apply(v) - 15.0 * v).norm() < 1e-12);
  }
  SUBCASE("invalid dimension") { CHECK_THROWS_AS(boson_annihilator(1), DimensionError); }
}

TEST_CASE("ladder commutator is the identity except at the truncation edge") {
  const Index d = 12;
  const Operator c = boson_annihilator(d);
  const Eigen::MatrixXcd comm = (c * c.adjoint() - c.adjoint() * c).dense();
  const Eigen::MatrixXcd diff = comm - Eigen::MatrixXcd::Identity(d, d);
  CHECK(diff.topLeftCorner(d - 1, d - 1).cwiseAbs().maxCoeff() <= 1e-12);
  // Only the last diagonal entry is broken: [c, c^dag]_{d-1,d-1} = -(d-1).
  CHECK(diff.row(d - 1).head(d - 1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(diff.col(d - 1).head(d - 1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(comm(d - 1, d - 1).real() == doctest::Approx(-(d - 1.0)));
}

TEST_CASE("spin site operators") {
  SUBCASE("single-site embedding") {
    const HilbertSpec spec(1, 2);
    Eigen::MatrixXcd sx(2, 2);
    sx << 0, 1, 1, 0;
    const Eigen::MatrixXcd expected = oracle::kron(Eigen::MatrixXcd::Identity(2, 2), sx);
    CHECK(spin_site_operator(spec, 1, SpinOp::x).dense().isApprox(expected));
  }
  SUBCASE("population spectrum is {0, 1}") {
    const HilbertSpec spec(3, 3);
    const Operator pop = spin_site_operator(spec, 2, SpinOp::population);
    const Eigen::MatrixXcd d = pop.dense();
    CHECK(d.isDiagonal());
    for (Index i = 0; i < d.rows(); ++i) CHECK((d(i, i) == Complex{0.0} || d(i, i) == Complex{1.0}));
    CHECK((pop * pop - pop).max_abs() == 0.0);
  }
  SUBCASE("distinct sites commute") {
    const HilbertSpec spec(3, 4);
    const Operator a = spin_site_operator(spec, 1, SpinOp::x);
    const Operator b = spin_site_operator(spec, 2, SpinOp::x);
    CHECK((a * b - b * a).max_abs() == 0.0);
  }
  SUBCASE("Pauli algebra per site") {
    const HilbertSpec spec(3, 2);
    for (std::size_t site = 1; site <= 3; ++site) {
      const Operator x = spin_site_operator(spec, site, SpinOp::x);
      const Operator y = spin_site_operator(spec, site, SpinOp::y);
      const Operator z = spin_site_operator(spec, site, SpinOp::z);
      const Operator id = Operator::identity(spec.total_dim());
      CHECK((x * y - 1i * z).max_abs() <= 1e-12);
      CHECK((x * x - id).max_abs() <= 1e-12);
      CHECK((y * y - id).max_abs() <= 1e-12);
      CHECK((z * z - id).max_abs() <= 1e-12);
    }
  }
  SUBCASE("ladder relations") {
    const HilbertSpec spec(2, 2);
    const Operator x = spin_site_operator(spec, 2, SpinOp::x);
    const Operator y = spin_site_operator(spec, 2, SpinOp::y);
    const Operator z = spin_site_operator(spec, 2, SpinOp::z);
    const Operator up = spin_site_operator(spec, 2, SpinOp::raise);
    const Operator down = spin_site_operator(spec, 2, SpinOp::lower);
    const Operator pop = spin_site_operator(spec, 2, SpinOp::population);
    const Operator id = Operator::identity(spec.total_dim());
    CHECK((up - 0.5 * (x + 1i * y)).max_abs() <= 1e-12);
    CHECK((down - 0.5 * (x - 1i * y)).max_abs() <= 1e-12);
    CHECK((up * down - pop).max_abs() <= 1e-12);
    CHECK((pop - 0.5 * (id + z)).max_abs() <= 1e-12);
  }
  SUBCASE("site out of range") {
    const HilbertSpec spec(2, 2);
    CHECK_THROWS_AS(spin_site_operator(spec, 0, SpinOp::x), IndexError);
    CHECK_THROWS_AS(spin_site_operator(spec, 3, SpinOp::x), IndexError);
  }
  SUBCASE("Hermitian kinds are flagged") {
    const HilbertSpec spec(2, 3);
    for (SpinOp k : {SpinOp::x, SpinOp::y, SpinOp::z, SpinOp::population}) {
      const Operator op = spin_site_operator(spec, 1, k);
      CHECK(op.is_hermitian());
      CHECK(op.hermiticity_defect() <= kHermitianTolerance);
    }
  }
}

TEST_CASE("tensor_embed") {
  SUBCASE("identity and dimensions") {
    const Operator id = tensor_embed(Operator::identity(3), Operator::identity(2));
    CHECK(id.dim() == 6);
    CHECK(id.dense().isApprox(Eigen::MatrixXcd::Identity(6, 6)));
  }
  SUBCASE("random sparse operands match the dense Kronecker oracle") {
    std::mt19937_64 rng(11);
    std::bernoulli_distribution keep(0.4);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXcd a = oracle::random_complex(4, 4, rng);
      Eigen::MatrixXcd b = oracle::random_complex(2, 2, rng);
      for (Index i = 0; i < 16; ++i)
        if (!keep(rng)) a(i / 4, i % 4) = 0.0;
      const Operator k = tensor_embed(Operator::from_dense(a), Operator::from_dense(b));
      CHECK(k.dim() == 8);
      CHECK((k.dense() - oracle::kron(a, b)).cwiseAbs().maxCoeff() <= 1e-14);

      const Vector u = oracle::random_state(4, rng);
      const Vector v = oracle::random_state(2, rng);
      Vector uv(8);
      Vector auv(8);
      const Vector au = a * u;
      const Vector bv = b * v;
      for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 2; ++j) {
          uv[i * 2 + j] = u[i] * v[j];
          auv[i * 2 + j] = au[i] * bv[j];
        }
      CHECK((k.apply(uv) - auv).norm() <= 1e-13);
    }
  }
}

TEST_CASE("Operator assembly") {
  SUBCASE("duplicates are summed once") {
    const Operator op = Operator::from_triplets(2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}});
    CHECK(op.nnz() == 2);
    CHECK(op.matrix().coeff(0, 1) == Complex{3.0});
  }
  SUBCASE("out-of-range coordinates are rejected") {
    CHECK_THROWS_AS(Operator::from_triplets(2, {{2, 0, 1.0}}), IndexError);
  }
  SUBCASE("Hermitian flag is verified") {
    CHECK_THROWS_AS(Operator::from_triplets(2, {{0, 1, 1.0}}).as_hermitian(), NumericalError);
    CHECK(Operator::from_triplets(2, {{0, 1, 1i}, {1, 0, -1i}}).as_hermitian().is_hermitian());
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(Operator::identity(2) + Operator::identity(3), DimensionError);
  }
}

TEST_CASE("PureState normalization") {
  CHECK_THROWS_AS(PureState(Vector::Ones(2)), NormalizationError);
  Vector v(2);
  v << 1.0, 1e-4;
  CHECK_THROWS_AS(PureState{v}, NormalizationError);
  CHECK(PureState(v / v.norm()).norm_error() <= kNormTolerance);
}
