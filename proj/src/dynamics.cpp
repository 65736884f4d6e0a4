#include "knotopo/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "knotopo/twolevel.hpp"
#include "stepping.hpp"

namespace kno {

const char* to_string(InitialState s) noexcept {
  switch (s) {
    case InitialState::ket0: return "ket0";
    case InitialState::ket1: return "ket1";
    case InitialState::custom: return "custom";
  }
  return "unknown";
}

namespace {

StateVector initial_state(const KerrModel& model, const RunOptions& opt) {
  switch (opt.initial) {
    case InitialState::ket0: return model.frame().ket0();
    case InitialState::ket1: return model.frame().ket1();
    case InitialState::custom:
      if (!opt.custom_state) {
        throw Error(ErrorCode::invalid_argument, "custom initial state requested but not supplied");
      }
      if (opt.custom_state->dim() != model.params().dim) {
        throw Error(ErrorCode::dimension_mismatch, "custom initial state has wrong dimension");
      }
      return opt.custom_state->normalized();
  }
  throw Error(ErrorCode::invalid_argument, "unknown initial state");
}

}  // namespace

Trajectory propagate(const KerrModel& model, const RunOptions& opt) {
  if (opt.n_steps < 100) throw Error(ErrorCode::invalid_argument, "n_steps must be >= 100");
  const detail::StepGrid grid = detail::make_grid(opt.n_steps, opt.n_samples);
  const double tau = model.params().tau;

  std::vector<int> snapshot_index;
  for (double f : opt.snapshot_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::out_of_range, "snapshot fractions must lie in [0, 1]");
    }
    snapshot_index.push_back(static_cast<int>(std::lround(f * grid.intervals)));
  }

  Trajectory traj;
  traj.samples.resize(opt.n_samples);
  traj.n_steps = grid.n_steps();
  traj.initial = opt.initial;
  traj.sta = opt.sta;

  StateVector psi = initial_state(model, opt);
  std::vector<std::optional<StateVector>> snaps(snapshot_index.size());

  auto step = [&](double t, double dt) {
    psi = propagate_step(model.total_hamiltonian(t, opt.sta), psi, dt);
  };
  auto record = [&](int k, double t) {
    const BlochReading b = bloch_vector(psi, model.frame());
    Sample& s = traj.samples[k];
    s.t = t;
    s.theta = model.schedule().theta(t);
    s.sx = b.sx;
    s.sy = b.sy;
    s.sz = b.sz;
    s.pop = b.pop;
    s.norm = psi.norm();
    traj.max_edge_population = std::max(traj.max_edge_population, edge_population(psi));
    for (std::size_t i = 0; i < snapshot_index.size(); ++i) {
      if (snapshot_index[i] == k) snaps[i] = psi;
    }
  };
  detail::integrate(tau, grid, step, record);

  for (std::size_t i = 0; i < snaps.size(); ++i) {
    traj.snapshots.push_back({traj.samples[snapshot_index[i]].t, *snaps[i]});
  }
  return traj;
}

double max_bloch_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size()) {
    throw Error(ErrorCode::dimension_mismatch, "trajectories have different sample counts");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const Sample& x = a.samples[i];
    const Sample& y = b.samples[i];
    worst = std::max({worst, std::abs(x.sx - y.sx), std::abs(x.sy - y.sy), std::abs(x.sz - y.sz)});
  }
  return worst;
}

Trajectory run(const KerrModel& model, const RunOptions& opt) {
  RunOptions current = opt;
  Trajectory coarse = propagate(model, current);
  Trajectory fine;
  for (int r = 0; r < std::max(1, opt.max_refinements); ++r) {
    current.n_steps = coarse.n_steps * 2;
    fine = propagate(model, current);
    fine.refinement_delta = max_bloch_deviation(coarse, fine);
    if (fine.refinement_delta <= opt.convergence_tol) {
      fine.converged = true;
      return fine;
    }
    coarse = std::move(fine);
  }
  coarse.converged = false;
  return coarse;
}

FidelitySeries instantaneous_eigenstate_fidelity(const Trajectory& traj, const ModelParams& p) {
  FidelitySeries out;
  if (traj.samples.empty()) return out;
  auto axis = [&](const Sample& s) {
    const DriveAmplitudes d = drive_amplitudes(p, s.theta);
    const double th = twolevel::eigensystem(d.delta_z, d.omega, p.phi).mixing_angle;
    return Eigen::Vector3d(std::sin(th) * std::cos(p.phi), std::sin(th) * std::sin(p.phi),
                           std::cos(th));
  };
  const Sample& first = traj.samples.front();
  const Eigen::Vector3d s0(first.sx, first.sy, first.sz);
  out.upper_branch = axis(first).dot(s0) >= 0.0;
  const double sign = out.upper_branch ? 1.0 : -1.0;
  out.values.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) {
    const Eigen::Vector3d bloch(s.sx, s.sy, s.sz);
    const double f = 0.5 * (s.pop + sign * axis(s).dot(bloch));
    out.values.push_back(f);
    out.minimum = std::min(out.minimum, f);
  }
  return out;
}

}  // namespace kno
