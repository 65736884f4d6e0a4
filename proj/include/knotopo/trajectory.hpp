#pragma once

#include <vector>

#include "knotopo/fock.hpp"

namespace kno {

enum class InitialState { ket0, ket1, custom };

const char* to_string(InitialState s) noexcept;

struct Sample {
  double t = 0.0;      // us
  double theta = 0.0;  // rad
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double pop = 0.0;
  double norm = 0.0;
};

struct Snapshot {
  double t;
  StateVector state;
};

// Sampled time series of one propagation over [0, tau]; samples are strictly
// increasing in t, first at 0 and last at tau.
struct Trajectory {
  std::vector<Sample> samples;
  int n_steps = 0;
  bool converged = false;
  // Largest |s_j| change seen in the last refinement comparison.
  double refinement_delta = 0.0;
  // Largest population in the top three Fock levels along the run.
  double max_edge_population = 0.0;
  InitialState initial = InitialState::ket0;
  bool sta = false;
  std::vector<Snapshot> snapshots;
};

}  // namespace kno
