#pragma once

// Shared midpoint-exponential driver for the oscillator and two-level runs.

#include <algorithm>
#include <cmath>

#include "knotopo/error.hpp"

namespace kno::detail {

// Steps are grouped so that every sample lands on a step boundary; the
// requested count is rounded up to a multiple of the sample intervals.
struct StepGrid {
  int intervals;
  int steps_per_interval;
  int n_steps() const { return intervals * steps_per_interval; }
};

inline StepGrid make_grid(int n_steps, int n_samples) {
  if (n_samples < 2) throw Error(ErrorCode::invalid_argument, "n_samples must be >= 2");
  if (n_samples > n_steps) {
    throw Error(ErrorCode::invalid_argument, "n_samples must not exceed n_steps");
  }
  const int intervals = n_samples - 1;
  const int per = (n_steps + intervals - 1) / intervals;
  return {intervals, std::max(per, 1)};
}

// step(t_mid, dt) advances the state across one step; record(k, t) stores
// sample k at time t.
template <class Step, class Record>
void integrate(double tau, const StepGrid& grid, Step&& step, Record&& record) {
  const int total = grid.n_steps();
  const double dt = tau / total;
  record(0, 0.0);
  for (int k = 0; k < grid.intervals; ++k) {
    for (int s = 0; s < grid.steps_per_interval; ++s) {
      const int i = k * grid.steps_per_interval + s;
      step((i + 0.5) * dt, dt);
    }
    const int done = (k + 1) * grid.steps_per_interval;
    record(k + 1, done == total ? tau : done * dt);
  }
}

}  // namespace kno::detail
