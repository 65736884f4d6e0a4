#include <doctest.h>

#include <cmath>
#include <random>

#include "knotopo/fock.hpp"
#include "support.hpp"

using namespace kno;

TEST_SUITE("fock") {

TEST_CASE("annihilation has sqrt(n) on the superdiagonal") {
  const Matrix a = annihilation(3).matrix();
  CHECK(a(0, 1).real() == doctest::Approx(1.0));
  CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
  int nonzero = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) nonzero += std::abs(a(i, j)) > 0.0;
  CHECK(nonzero == 2);
  CHECK((creation(3).matrix() - a.adjoint()).norm() == 0.0);
}

TEST_CASE("creation times annihilation is the number operator") {
  const Matrix n = (creation(3) * annihilation(3)).matrix();
  for (int k = 0; k < 3; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
  CHECK((number(30).matrix() - (creation(30) * annihilation(30)).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("commutator [a, a^dag] is identity except the truncation corner") {
  const int dim = 30;
  const Matrix a = annihilation(dim).matrix();
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  Matrix expected = Matrix::Identity(dim, dim);
  expected(dim - 1, dim - 1) = -(dim - 1.0);
  CHECK((c - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dimension below two is rejected") {
  CHECK(support::code_of([] { annihilation(1); }) == ErrorCode::invalid_dimension);
  CHECK(support::code_of([] { parity(0); }) == ErrorCode::invalid_dimension);
  CHECK(support::code_of([] { Operator(Matrix::Zero(1, 1)); }) == ErrorCode::invalid_dimension);
}

TEST_CASE("coherent state at zero is the vacuum") {
  const StateVector v = coherent_state(0.0, 10).state;
  CHECK(fidelity(v, StateVector::basis(10, 0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coherent state amplitudes match the Poisson form") {
  const double a0 = std::sqrt(2.0);
  const Vector c = coherent_state(a0, 30).state.amplitudes();
  for (int n = 0; n < 30; ++n) {
    CHECK(std::abs(c[n] - support::coherent_amplitude(a0, n)) < 1e-12);
  }
}

TEST_CASE("opposite coherent states overlap as exp(-2|a|^2)") {
  const double a0 = std::sqrt(2.0);
  const StateVector p = coherent_state(a0, 30).state;
  const StateVector m = coherent_state(-a0, 30).state;
  CHECK(inner(m, p).real() == doctest::Approx(std::exp(-4.0)).epsilon(1e-9));
  CHECK(std::exp(-4.0) == doctest::Approx(0.018316).epsilon(1e-4));
}

TEST_CASE("coherent state mean photon number by Fock sum") {
  const StateVector p = coherent_state(std::sqrt(2.0), 30).state;
  double mean = 0.0;
  for (int n = 0; n < 30; ++n) mean += n * std::norm(p.amplitudes()[n]);
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(expectation(p, number(30)).real() == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("coherent state is an eigenvector of a") {
  for (double r : {0.5, 1.0, std::sqrt(2.0), 2.0}) {
    const cplx alpha = std::polar(r, 0.7);
    const int dim = recommended_dim(r);
    const StateVector s = coherent_state(alpha, dim).state;
    const Vector res = annihilation(dim).matrix() * s.amplitudes() - alpha * s.amplitudes();
    // Truncation removes only a|dim-1>, leaving alpha c_{dim-1} in the last slot.
    const double edge = r * std::abs(support::coherent_amplitude(alpha, dim - 1));
    CHECK(res.norm() == doctest::Approx(edge).epsilon(1e-6));
  }
}

TEST_CASE("coherent state refuses a truncation that leaks") {
  CHECK(support::code_of([] { coherent_state(std::sqrt(2.0), 10); }) == ErrorCode::truncation_too_small);
  const CoherentState loose = coherent_state(std::sqrt(2.0), 10, 1.0);
  CHECK(loose.leakage > 1e-8);
  CHECK(loose.leakage == doctest::Approx(support::poisson_tail(2.0, 10)).epsilon(1e-6));
}

TEST_CASE("displacement of the vacuum is a coherent state") {
  const cplx alpha(0.8, -0.6);
  const StateVector d0(displacement(alpha, 30).matrix() * StateVector::basis(30, 0).amplitudes());
  CHECK(fidelity(d0, coherent_state(alpha, 30).state) >= 1.0 - 1e-10);
}

TEST_CASE("displacement of zero is the identity") {
  CHECK((displacement(0.0, 20).matrix() - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vacuum element of D(1) is exp(-1/2)") {
  CHECK(displacement(1.0, 40).matrix()(0, 0).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("D(alpha) D(-alpha) is the identity on the inner block") {
  const int dim = 40;
  const cplx alpha(1.1, 0.4);
  const Matrix prod = displacement(alpha, dim).matrix() * displacement(-alpha, dim).matrix();
  // Fock states up to 15 stay well inside the space under both displacements.
  const int inner_dim = 15;
  CHECK((prod.topLeftCorner(inner_dim, inner_dim) - Matrix::Identity(inner_dim, inner_dim)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("parity") {
  const Matrix p2 = parity(2).matrix();
  CHECK(p2(0, 0).real() == 1.0);
  CHECK(p2(1, 1).real() == -1.0);
  CHECK(std::abs(p2(0, 1)) == 0.0);
  const Matrix p = parity(30).matrix();
  CHECK((p * p - Matrix::Identity(30, 30)).norm() < 1e-14);
  const StateVector s = coherent_state(std::sqrt(2.0), 30).state;
  double fock_sum = 0.0;
  for (int n = 0; n < 30; ++n) fock_sum += (n % 2 ? -1.0 : 1.0) * std::norm(s.amplitudes()[n]);
  CHECK(expectation(s, parity(30)).real() == doctest::Approx(std::exp(-4.0)).epsilon(1e-6));
  CHECK(expectation(s, parity(30)).real() == doctest::Approx(fock_sum).epsilon(1e-12));
}

TEST_CASE("diagonal evolution multiplies |1> by exp(-i w dt)") {
  const double w = 2.3;
  const double dt = 0.41;
  const Operator h = Operator::hermitian(w * number(4).matrix());
  const StateVector out = propagate_step(h, StateVector::basis(4, 1), dt);
  CHECK(std::abs(out.amplitudes()[1] - std::polar(1.0, -w * dt)) < 1e-14);
}

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
  const StateVector s = coherent_state(cplx(0.3, 0.2), 12).state;
  const StateVector out = propagate_step(Operator::hermitian(Matrix::Zero(12, 12)), s, 1.0);
  CHECK((out.amplitudes() - s.amplitudes()).norm() < 1e-14);
}

TEST_CASE("two half steps equal one full step") {
  std::mt19937 rng(7);
  const Operator h = support::random_hermitian(16, rng);
  const StateVector s = support::random_state(16, rng);
  const StateVector full = propagate_step(h, s, 0.3);
  const StateVector half = propagate_step(h, propagate_step(h, s, 0.15), 0.15);
  CHECK(fidelity(full, half) >= 1.0 - 1e-12);
}

TEST_CASE("propagation conserves the norm") {
  std::mt19937 rng(11);
  StateVector s = support::random_state(20, rng);
  for (int k = 0; k < 200; ++k) s = propagate_step(support::random_hermitian(20, rng), s, 0.05);
  CHECK(std::abs(s.norm() - 1.0) <= 1e-9);
}

TEST_CASE("propagate_step preconditions") {
  const StateVector s = StateVector::basis(3, 0);
  const Operator not_flagged(cplx(0.0, 1.0) * annihilation(3).matrix());
  CHECK(support::code_of([&] { propagate_step(not_flagged, s, 0.1); }) == ErrorCode::invalid_argument);
  CHECK(support::code_of([&] { propagate_step(number(3), s, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(support::code_of([&] { propagate_step(number(4), s, 0.1); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("hermitian() rejects non-Hermitian input") {
  CHECK(support::code_of([] { Operator::hermitian(annihilation(4).matrix()); }) == ErrorCode::numerical);
  CHECK(number(5).is_hermitian());
  CHECK_FALSE(annihilation(5).is_hermitian());
}

TEST_CASE("expectation values") {
  CHECK(std::abs(expectation(StateVector::basis(8, 0), number(8))) == 0.0);
  std::mt19937 rng(3);
  const StateVector s = support::random_state(9, rng);
  CHECK(expectation(s, identity(9)).real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normalize meets the norm tolerance") {
  std::mt19937 rng(5);
  Vector v = support::random_state(10, rng).amplitudes() * 7.3;
  CHECK(std::abs(StateVector(v).normalized().norm() - 1.0) <= 1e-9);
  CHECK(support::code_of([] { StateVector(Vector::Zero(4)).normalized(); }) == ErrorCode::numerical);
}

TEST_CASE("edge population counts the top three levels") {
  Vector v = Vector::Zero(10);
  v[7] = 0.6;
  v[0] = 0.8;
  CHECK(edge_population(StateVector(v)) == doctest::Approx(0.36));
}

}
