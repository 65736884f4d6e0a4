#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "knotopo/twolevel.hpp"
#include "support.hpp"

using namespace kno;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams sta_params(double chi) {
  ModelParams p;
  p.pump = 2.0 * kPi * 1000.0;
  p.kerr = p.pump / 2.0;
  p.omega0 = 2.0 * kPi * 0.02;
  p.delta_z = p.omega0;
  p.tau = 1.5;
  p.schedule = Schedule::cosine;
  p.set_chi(chi);
  return p;
}

// Bloch vector of the upper eigenstate at ramp angle theta.
Eigen::Vector3d upper_axis(const ModelParams& p, double theta) {
  const DriveAmplitudes d = drive_amplitudes(p, theta);
  const double th = std::atan2(d.omega, d.delta_z);
  return {std::sin(th) * std::cos(p.phi), std::sin(th) * std::sin(p.phi), std::cos(th)};
}

}  // namespace

TEST_SUITE("twolevel") {

TEST_CASE("3-4-5 eigenvalues") {
  const twolevel::Eigensystem es = twolevel::eigensystem(3.0, 4.0, 0.0);
  CHECK(es.e_plus == doctest::Approx(2.5));
  CHECK(es.e_minus == doctest::Approx(-2.5));
}

TEST_CASE("pure transverse field has mixing angle pi/2") {
  CHECK(twolevel::eigensystem(0.0, 1.3, 0.0).mixing_angle == doctest::Approx(kPi / 2));
  CHECK(twolevel::eigensystem(-2.0, 1e-9, 0.0).mixing_angle == doctest::Approx(kPi).epsilon(1e-8));
  CHECK(support::code_of([] { twolevel::eigensystem(0.0, 0.0, 0.0); }) == ErrorCode::degenerate_hamiltonian);
}

TEST_CASE("eigenvector residuals") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  for (int k = 0; k < 100; ++k) {
    const double dz = u(rng);
    const double w = std::abs(u(rng));
    const double phi = ph(rng);
    const Eigen::Matrix2cd h = twolevel::hamiltonian(dz, w, phi);
    const twolevel::Eigensystem es = twolevel::eigensystem(dz, w, phi);
    CHECK((h * es.excited - es.e_plus * es.excited).norm() <= 1e-12);
    CHECK((h * es.ground - es.e_minus * es.ground).norm() <= 1e-12);
    CHECK(std::abs(es.excited.norm() - 1.0) <= 1e-14);
    CHECK(std::abs(es.excited.dot(es.ground)) <= 1e-14);
  }
}

TEST_CASE("mixing rate matches central differences") {
  ModelParams p = sta_params(0.4);
  p.delta_z = 2.0 * p.omega0;
  const RampSchedule r(p.schedule, p.tau);
  auto mixing = [&](double t) {
    const DriveAmplitudes d = drive_amplitudes(p, r.theta(t));
    return std::atan2(d.omega, d.delta_z);
  };
  for (double t : {0.2, 0.7, 1.1}) {
    const double h = 1e-6;
    CHECK(twolevel::mixing_rate(p, r, t) == doctest::Approx((mixing(t + h) - mixing(t - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("counterdiabatic driving keeps the ground state exactly") {
  for (double chi : {-0.5, 0.0, 0.5, 1.2, 2.0}) {
    const ModelParams p = sta_params(chi);
    twolevel::ReferenceOptions opt;
    opt.initial = InitialState::ket1;  // ground state at theta = 0 for chi > -1
    opt.sta = true;
    opt.n_steps = 40000;
    const Trajectory traj = twolevel::reference_dynamics(p, opt);
    double worst = 0.0;
    for (const Sample& s : traj.samples) {
      const double f = 0.5 * (1.0 - upper_axis(p, s.theta).dot(Eigen::Vector3d(s.sx, s.sy, s.sz)));
      worst = std::max(worst, 1.0 - f);
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("slow ramp without counterdiabatic term is adiabatic") {
  ModelParams p = sta_params(0.0);
  p.omega0 = 11.5;
  p.delta_z = 11.5;
  p.tau = 400.0;
  p.schedule = Schedule::linear;
  twolevel::ReferenceOptions opt;
  opt.n_steps = 40000;
  const Trajectory traj = twolevel::reference_dynamics(p, opt);
  CHECK(traj.samples.back().sz == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("ideal STA endpoints of theta_q") {
  for (double chi : {-0.5, 0.0, 0.5, -1.5, 1.2}) {
    twolevel::ReferenceOptions opt;
    opt.sta = true;
    const Trajectory traj = twolevel::reference_dynamics(sta_params(chi), opt);
    const Sample& last = traj.samples.back();
    const double theta_q = std::acos(std::clamp(last.sz, -1.0, 1.0));
    CHECK(theta_q == doctest::Approx(std::abs(chi) < 1.0 ? kPi : 0.0).epsilon(1e-6));
  }
}

TEST_CASE("monopole Chern number") {
  CHECK(twolevel::monopole_chern(0.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(twolevel::monopole_chern(2.0)) <= 1e-6);
  CHECK(twolevel::monopole_chern(0.999) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(support::code_of([] { twolevel::monopole_chern(1.0); }) == ErrorCode::on_manifold_degeneracy);
  CHECK(support::code_of([] { twolevel::monopole_chern(0.0, 0.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("monopole Chern number is quantized away from the transition") {
  for (double chi : {-3.0, -1.5, -1.06, -0.94, -0.3, 0.6, 0.94, 1.06, 1.8}) {
    for (double aspect : {0.5, 1.0, 2.0}) {
      const double c = twolevel::monopole_chern(chi, aspect);
      CHECK(c == doctest::Approx(std::abs(chi) < 1.0 ? 1.0 : 0.0).epsilon(1e-3));
    }
  }
}

}
