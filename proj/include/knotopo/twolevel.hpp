#pragma once

// Analytic two-level reduction H_i = (1/2)[[Dz, W e^{-i phi}], [W e^{i phi}, -Dz]]:
// eigen-structure, counterdiabatic reference dynamics and the monopole-field
// Chern number. Serves as the oracle for the oscillator simulation.

#include <Eigen/Dense>

#include "knotopo/model.hpp"
#include "knotopo/trajectory.hpp"

namespace kno::twolevel {

struct Eigensystem {
  double e_plus;
  double e_minus;
  // Theta = atan2(W, Dz); in (0, pi) for W > 0.
  double mixing_angle;
  // (cos(Theta/2), e^{i phi} sin(Theta/2))
  Eigen::Vector2cd excited;
  // (-e^{-i phi} sin(Theta/2), cos(Theta/2)); ground = lower eigenvalue E_-.
  Eigen::Vector2cd ground;
};

Eigen::Matrix2cd hamiltonian(double delta_z, double omega, double phi);

// Throws degenerate_hamiltonian at Dz = W = 0.
Eigensystem eigensystem(double delta_z, double omega, double phi);

// d/dt atan2(W, Dz) along the ramp, for arbitrary delta_z / omega0.
double mixing_rate(const ModelParams& p, const RampSchedule& ramp, double t);

struct ReferenceOptions {
  InitialState initial = InitialState::ket0;
  bool sta = false;
  int n_steps = 4000;
  int n_samples = 400;
};

// Propagates H_i(t) (+ (Theta_dot/2)(cos(phi) sigma_y - sin(phi) sigma_x) when
// sta) with the same midpoint-exponential stepper as the oscillator run.
// Samples carry pop = norm = 1.
Trajectory reference_dynamics(const ModelParams& p, const ReferenceOptions& opt);

// First Chern number of the monopole at the origin enclosed by the manifold
// (W0 sin(theta) cos(phi), W0 sin(theta) sin(phi), Dz cos(theta) + D0), with
// aspect = Dz / W0 and chi = D0 / Dz. Computed as the total solid angle of the
// triangulated manifold. Throws on_manifold_degeneracy for |chi| = 1.
double monopole_chern(double chi, double aspect = 1.0);

}  // namespace kno::twolevel
