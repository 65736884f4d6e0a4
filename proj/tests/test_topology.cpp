#include <doctest.h>

#include <cmath>
#include <numbers>

#include "knotopo/topology.hpp"
#include "knotopo/twolevel.hpp"
#include "support.hpp"

using namespace kno;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams fig1_params() {
  ModelParams p;
  p.pump = 2.0 * kPi * 1000.0;
  p.kerr = p.pump / 2.0;
  p.omega0 = p.pump / (10.0 * std::exp(4.0));
  p.delta_z = 2.0 * p.omega0;
  p.tau = 40.0;
  p.schedule = Schedule::linear;
  return p;
}

ModelParams sta_params(double chi) {
  ModelParams p = fig1_params();
  p.omega0 = 2.0 * kPi * 0.02;
  p.delta_z = p.omega0;
  p.tau = 1.5;
  p.schedule = Schedule::cosine;
  p.set_chi(chi);
  return p;
}

// Synthetic trajectory on a linear ramp over [0, tau] with the given readout.
template <class F>
Trajectory synthetic(double tau, int n, F&& bloch) {
  Trajectory t;
  for (int k = 0; k < n; ++k) {
    Sample s;
    s.t = tau * k / (n - 1);
    s.theta = kPi * k / (n - 1);
    bloch(s);
    s.pop = 1.0;
    s.norm = 1.0;
    t.samples.push_back(s);
  }
  return t;
}

std::vector<ThetaQPoint> polar_series(int n, double start, double end) {
  std::vector<ThetaQPoint> out;
  for (int k = 0; k < n; ++k) {
    const double f = static_cast<double>(k) / (n - 1);
    out.push_back({f, kPi * f, start + (end - start) * f});
  }
  return out;
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("zero sigma_y gives zero curvature") {
  const ModelParams p = fig1_params();
  const Trajectory t = synthetic(p.tau, 101, [](Sample& s) { s.sz = 1.0; });
  for (const CurvaturePoint& c : berry_curvature(t, p)) CHECK(c.b_theta == 0.0);
}

TEST_CASE("curvature is odd in sigma_y") {
  const ModelParams p = fig1_params();
  const Trajectory a = synthetic(p.tau, 101, [](Sample& s) { s.sy = 0.01 * std::sin(s.theta); });
  const Trajectory b = synthetic(p.tau, 101, [](Sample& s) { s.sy = -0.01 * std::sin(s.theta); });
  const CurvatureSeries ca = berry_curvature(a, p);
  const CurvatureSeries cb = berry_curvature(b, p);
  for (std::size_t i = 0; i < ca.size(); ++i) CHECK(ca[i].b_theta == -cb[i].b_theta);
}

TEST_CASE("cosine ramp endpoints have zero velocity but finite curvature") {
  ModelParams p = sta_params(0.0);
  Trajectory t;
  const RampSchedule r(p.schedule, p.tau);
  for (int k = 0; k <= 100; ++k) {
    Sample s;
    s.t = p.tau * k / 100.0;
    s.theta = r.theta(s.t);
    s.sy = -0.001;
    t.samples.push_back(s);
  }
  const CurvatureSeries c = berry_curvature(t, p);
  CHECK(c.front().b_theta == 0.0);
  CHECK(c.back().b_theta == 0.0);
  CHECK(c[50].b_theta > 0.0);
  p.phi = 0.3;
  CHECK(support::code_of([&] { berry_curvature(t, p); }) == ErrorCode::invalid_argument);
}

TEST_CASE("sin(theta)/2 integrates to one") {
  CurvatureSeries s;
  for (int k = 0; k < 400; ++k) {
    const double th = kPi * k / 399.0;
    s.push_back({th, 0.5 * std::sin(th)});
  }
  const ChernResult r = chern_linear_response(s);
  CHECK(r.c1 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.method == ChernMethod::linear_response);
  CHECK(r.warnings.empty());
  s.resize(9);
  CHECK(support::code_of([&] { chern_linear_response(s); }) == ErrorCode::insufficient_sampling);
}

TEST_CASE("sanity band warning") {
  CurvatureSeries s;
  for (int k = 0; k < 50; ++k) s.push_back({kPi * k / 49.0, 1.0});
  CHECK_FALSE(chern_linear_response(s).warnings.empty());
}

TEST_CASE("adiabatic two-level response gives B = sin(theta)/2") {
  ModelParams p = fig1_params();
  p.delta_z = p.omega0;
  p.tau = 400.0;
  // A linear ramp switches on abruptly and rings at the gap frequency with an
  // amplitude comparable to the response itself; the cosine ramp does not.
  p.schedule = Schedule::cosine;
  twolevel::ReferenceOptions o;
  o.n_steps = 40000;
  o.n_samples = 401;
  const Trajectory traj = twolevel::reference_dynamics(p, o);
  const CurvatureSeries c = berry_curvature(traj, p);
  for (std::size_t i = 20; i + 20 < c.size(); ++i) {
    CHECK(std::abs(c[i].b_theta - 0.5 * std::sin(c[i].theta)) <= 0.02);
  }
  CHECK(chern_linear_response(c).c1 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("oscillator linear-response curvature peaks near pi/2") {
  const ModelParams p = fig1_params();
  RunOptions o;
  o.n_steps = 20000;
  o.n_samples = 401;
  const CurvatureSeries c = berry_curvature(propagate(KerrModel(p), o), p);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].b_theta > c[peak].b_theta) peak = i;
  }
  CHECK(std::abs(c[peak].theta - kPi / 2) <= 0.25);
  CHECK(c[peak].b_theta > 0.3);
}

TEST_CASE("theta_q readout") {
  const Trajectory t = synthetic(1.0, 11, [](Sample& s) {
    s.sz = std::cos(s.theta);
    s.sx = std::sin(s.theta);
  });
  const auto q = theta_q_series(t);
  CHECK(q.front().theta_q == 0.0);
  for (const ThetaQPoint& p : q) CHECK(p.theta_q == doctest::Approx(p.theta).epsilon(1e-12));
  Trajectory bad = t;
  bad.samples[4].sx = bad.samples[4].sy = bad.samples[4].sz = 0.0;
  CHECK(support::code_of([&] { theta_q_series(bad); }) == ErrorCode::degenerate_readout);
}

TEST_CASE("polar-angle Chern number") {
  const ChernResult full = chern_sta(polar_series(400, 0.0, kPi));
  CHECK(full.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.method == ChernMethod::sta_polar);
  CHECK(std::abs(full.integral_closed_form - full.integral_quadrature) <= 0.01);
  CHECK(std::abs(chern_sta(polar_series(400, 0.0, 0.0)).c1) <= 1e-12);
  // ket1 starts at theta_q = pi: staying there counts the whole sphere,
  // returning to 0 counts nothing.
  CHECK(chern_sta(polar_series(400, kPi, kPi)).c1 == doctest::Approx(1.0));
  CHECK(std::abs(chern_sta(polar_series(400, kPi, 0.0)).c1) <= 1e-12);
  CHECK(support::code_of([] { chern_sta(polar_series(1, 0.0, 0.0)); }) == ErrorCode::insufficient_sampling);
}

TEST_CASE("coarse non-monotone theta_q is reported") {
  std::vector<ThetaQPoint> s = {{0.0, 0.0, 0.0}, {0.5, 1.5, 3.0}, {1.0, kPi, 0.2}};
  CHECK_FALSE(chern_sta(s).warnings.empty());
}

TEST_CASE("STA sweep gives the Chern steps and their complement") {
  const std::vector<double> chis = {1.5, -1.5, -1.2, -0.5, 0.0, 0.5, 1.2};
  SweepOptions o;
  o.protocol = SweepProtocol::sta;
  o.run.sta = true;
  o.run.n_steps = 2000;
  o.run.n_samples = 201;
  o.run.max_refinements = 1;
  o.run.convergence_tol = 1e-3;
  o.jobs = 2;
  const auto k0 = sweep_chi(sta_params(0.0), chis, o);
  o.run.initial = InitialState::ket1;
  const auto k1 = sweep_chi(sta_params(0.0), chis, o);
  REQUIRE(k0.size() == 7);
  for (std::size_t i = 0; i < k0.size(); ++i) {
    if (i) CHECK(k0[i].chi > k0[i - 1].chi);
    REQUIRE(k0[i].result);
    REQUIRE(k1[i].result);
    const double expect = std::abs(k0[i].chi) < 1.0 ? 1.0 : 0.0;
    CHECK(k0[i].result->c1 == doctest::Approx(expect).epsilon(0.05));
    CHECK(k1[i].result->c1 == doctest::Approx(1.0 - k0[i].result->c1).epsilon(0.1));
    CHECK(k1[i].result->initial == InitialState::ket1);
  }
}

TEST_CASE("sweep is deterministic and records failures") {
  ModelParams p = fig1_params();
  p.tau = 4.0;
  SweepOptions o;
  o.protocol = SweepProtocol::linear_response;
  o.run.n_steps = 2000;
  o.run.n_samples = 201;
  const std::vector<double> chis = {0.0, 0.0};
  const auto a = sweep_chi(p, chis, o);
  REQUIRE(a[0].result);
  REQUIRE(a[1].result);
  CHECK(a[0].result->c1 == a[1].result->c1);

  SweepOptions s = o;
  s.protocol = SweepProtocol::sta;  // delta_z != omega0: every point fails
  const std::vector<double> one = {0.5};
  const auto failed = sweep_chi(p, one, s);
  CHECK_FALSE(failed[0].result);
  CHECK(failed[0].status.find("delta_z = omega0") != std::string::npos);
}

}
