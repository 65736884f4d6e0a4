#include <doctest.h>

#include <cmath>
#include <numbers>

#include "knotopo/dynamics.hpp"
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

RunOptions sta_run(bool sta = true) {
  RunOptions o;
  o.sta = sta;
  o.n_steps = 4000;
  o.n_samples = 401;
  return o;
}

void check_invariants(const Trajectory& traj, double tau) {
  REQUIRE(traj.samples.size() >= 2);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == doctest::Approx(tau).epsilon(1e-14));
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    if (i) CHECK(s.t > traj.samples[i - 1].t);
    CHECK(std::abs(s.norm - 1.0) <= 1e-6);
    CHECK(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz <= s.pop * s.pop + 1e-6);
  }
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("undriven logical state is stationary") {
  ModelParams p = sta_params(0.0);
  p.omega0 = 0.0;
  p.delta_z = 0.0;
  p.delta_0 = 0.0;
  const KerrModel m(p);
  RunOptions o;
  o.n_steps = 200;
  o.n_samples = 51;
  const Trajectory traj = propagate(m, o);
  check_invariants(traj, p.tau);
  for (const Sample& s : traj.samples) CHECK(std::abs(s.sz - 1.0) <= 1e-6);
}

TEST_CASE("STA run wraps the Bloch sphere for chi = 0 and returns for chi = 1.2") {
  const Trajectory wrap = propagate(KerrModel(sta_params(0.0)), sta_run());
  check_invariants(wrap, 1.5);
  CHECK(wrap.samples.back().sz == doctest::Approx(-1.0).epsilon(0.02));
  const Trajectory back = propagate(KerrModel(sta_params(1.2)), sta_run());
  CHECK(back.samples.back().sz == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("eigenstate fidelity with and without the counterdiabatic term") {
  const ModelParams p = sta_params(0.0);
  const KerrModel m(p);
  const FidelitySeries with = instantaneous_eigenstate_fidelity(propagate(m, sta_run(true)), p);
  CHECK(with.upper_branch);
  CHECK(with.values.front() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(with.minimum >= 0.99);
  const FidelitySeries without = instantaneous_eigenstate_fidelity(propagate(m, sta_run(false)), p);
  CHECK(without.minimum < 0.99);
}

TEST_CASE("ket0 sits on the lower branch when chi < -1") {
  const ModelParams p = sta_params(-1.5);
  const FidelitySeries f = instantaneous_eigenstate_fidelity(propagate(KerrModel(p), sta_run()), p);
  CHECK_FALSE(f.upper_branch);
  CHECK(f.values.front() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f.minimum >= 0.99);
}

TEST_CASE("oscillator follows the two-level reference") {
  for (double chi : {0.0, 1.2}) {
    const ModelParams p = sta_params(chi);
    const Trajectory full = propagate(KerrModel(p), sta_run());
    twolevel::ReferenceOptions ro;
    ro.sta = true;
    ro.n_steps = 4000;
    ro.n_samples = 401;
    const Trajectory ref = twolevel::reference_dynamics(p, ro);
    CHECK(max_bloch_deviation(full, ref) <= 0.05);
  }
}

TEST_CASE("run doubles until converged") {
  const KerrModel m(sta_params(0.5));
  RunOptions o = sta_run();
  const Trajectory traj = run(m, o);
  CHECK(traj.converged);
  CHECK(traj.n_steps == 8000);
  CHECK(traj.refinement_delta <= 1e-4);
  const Trajectory coarse = propagate(m, o);
  CHECK(max_bloch_deviation(coarse, traj) == doctest::Approx(traj.refinement_delta));
}

TEST_CASE("non-convergence is flagged") {
  const KerrModel m(sta_params(0.5));
  RunOptions o = sta_run();
  o.n_steps = 400;
  o.n_samples = 101;
  o.convergence_tol = 1e-15;
  o.max_refinements = 1;
  const Trajectory traj = run(m, o);
  CHECK_FALSE(traj.converged);
  CHECK(traj.refinement_delta > 1e-15);
}

TEST_CASE("propagation is deterministic") {
  const KerrModel m(sta_params(0.5));
  const Trajectory a = propagate(m, sta_run());
  const Trajectory b = propagate(m, sta_run());
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].sx == b.samples[i].sx);
    CHECK(a.samples[i].sy == b.samples[i].sy);
    CHECK(a.samples[i].sz == b.samples[i].sz);
  }
}

TEST_CASE("custom initial state") {
  const KerrModel m(sta_params(0.0));
  RunOptions o = sta_run();
  o.initial = InitialState::custom;
  o.custom_state = m.frame().ket0();
  const Trajectory c = propagate(m, o);
  const Trajectory k = propagate(m, sta_run());
  CHECK(max_bloch_deviation(c, k) <= 1e-12);
  o.custom_state = StateVector::basis(12, 0);
  CHECK(support::code_of([&] { propagate(m, o); }) == ErrorCode::dimension_mismatch);
  o.custom_state.reset();
  CHECK(support::code_of([&] { propagate(m, o); }) == ErrorCode::invalid_argument);
}

TEST_CASE("snapshots land on samples") {
  const KerrModel m(sta_params(0.0));
  RunOptions o = sta_run();
  o.snapshot_fractions = {0.0, 0.5, 1.0};
  const Trajectory traj = propagate(m, o);
  REQUIRE(traj.snapshots.size() == 3);
  CHECK(traj.snapshots[0].t == 0.0);
  CHECK(traj.snapshots[1].t == doctest::Approx(0.75));
  CHECK(traj.snapshots[2].t == doctest::Approx(1.5));
  CHECK(fidelity(traj.snapshots[0].state, m.frame().ket0()) == doctest::Approx(1.0));
  o.snapshot_fractions = {1.5};
  CHECK(support::code_of([&] { propagate(m, o); }) == ErrorCode::out_of_range);
}

TEST_CASE("run preconditions") {
  const KerrModel m(sta_params(0.0));
  RunOptions o = sta_run();
  o.n_steps = 50;
  CHECK(support::code_of([&] { propagate(m, o); }) == ErrorCode::invalid_argument);
  o.n_steps = 200;
  o.n_samples = 300;
  CHECK(support::code_of([&] { propagate(m, o); }) == ErrorCode::invalid_argument);
  Trajectory a;
  a.samples.resize(3);
  Trajectory b;
  b.samples.resize(4);
  CHECK(support::code_of([&] { max_bloch_deviation(a, b); }) == ErrorCode::dimension_mismatch);
}

}
