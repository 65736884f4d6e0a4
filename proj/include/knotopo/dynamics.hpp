#pragma once

// Time-dependent Schroedinger propagation of the KNO over a ramp schedule.

#include <optional>
#include <vector>

#include "knotopo/model.hpp"
#include "knotopo/trajectory.hpp"

namespace kno {

struct RunOptions {
  InitialState initial = InitialState::ket0;
  // Used when initial == custom; must match the model dimension.
  std::optional<StateVector> custom_state;
  bool sta = false;
  int n_steps = 4000;
  int n_samples = 400;
  // Number of step doublings attempted by run() before giving up.
  int max_refinements = 2;
  // Maximum |s_j| change under a doubling for the run to count as converged.
  double convergence_tol = 1e-4;
  // Fractions of tau at which full states are kept (snapped to the nearest
  // sample).
  std::vector<double> snapshot_fractions;
};

// One pass of midpoint-exponential stepping: each step applies
// exp(-i H(t + dt/2) dt). No convergence check; converged stays false.
Trajectory propagate(const KerrModel& model, const RunOptions& opt);

// propagate() with step doubling until every sampled s_j changes by at most
// convergence_tol. Returns the finer trajectory of the last comparison; when
// the refinement budget runs out converged = false and refinement_delta holds
// the last observed change.
Trajectory run(const KerrModel& model, const RunOptions& opt);

struct FidelitySeries {
  std::vector<double> values;
  double minimum = 1.0;
  // True when the initial state sits on the upper (E_+) branch.
  bool upper_branch = true;
};

// Fidelity of the projected two-level state with the analytic instantaneous
// eigenstate of the branch occupied at t = 0. Uses the frame readout, so
// |<e|p>|^2 = (pop + n_e . s) / 2 with n_e the eigenstate's Bloch vector.
FidelitySeries instantaneous_eigenstate_fidelity(const Trajectory& traj, const ModelParams& p);

// Largest |s_j(a) - s_j(b)| over matching samples. Throws dimension_mismatch
// when the sample counts differ.
double max_bloch_deviation(const Trajectory& a, const Trajectory& b);

}  // namespace kno
