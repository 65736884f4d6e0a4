#pragma once

// Trajectory post-processing: Berry curvature from the linear response of
// <sigma_y>, the polar readout angle theta_q, both first-Chern-number
// estimators, and chi sweeps.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knotopo/dynamics.hpp"

namespace kno {

struct CurvaturePoint {
  double theta;
  double b_theta;
};

using CurvatureSeries = std::vector<CurvaturePoint>;

enum class ChernMethod { linear_response, sta_polar };

const char* to_string(ChernMethod m) noexcept;

struct ChernResult {
  double c1 = 0.0;
  ChernMethod method = ChernMethod::linear_response;
  double chi = 0.0;
  InitialState initial = InitialState::ket0;
  // sta_polar only: (1/2) integral of sin(theta_q) d theta_q by the exact
  // antiderivative and by trapezoidal quadrature over the samples.
  double integral_closed_form = 0.0;
  double integral_quadrature = 0.0;
  std::vector<std::string> warnings;
};

// b_theta = -(W0 sin(theta) / (2 v_theta)) <sigma_y> with v_theta = theta_dot.
// Samples where both v_theta and sin(theta) vanish get b_theta = 0; a vanishing
// velocity anywhere else throws invalid_argument.
CurvatureSeries berry_curvature(const Trajectory& traj, const ModelParams& p);

// C1 = integral_0^pi B_theta d theta by the trapezoid rule. Needs >= 10 points.
ChernResult chern_linear_response(const CurvatureSeries& series);

struct ThetaQPoint {
  double t;
  double theta;
  double theta_q;
};

// theta_q = arccos(s_z / |s|). Throws degenerate_readout (with the sample
// index) when |s| < 1e-6.
std::vector<ThetaQPoint> theta_q_series(const Trajectory& traj);

// C1q = (1/2)[1 - cos theta_q(pi)]: the flux of the cap swept from the pole
// theta_q = 0 of the parameter manifold to the final readout angle. This is
// the closed-form integral (1/2)[cos theta_q(0) - cos theta_q(pi)] plus the
// cap (1/2)[1 - cos theta_q(0)] between the pole and the initial readout, which
// vanishes for ket0. A warning is attached when the closed form and the
// quadrature disagree by more than 0.01.
ChernResult chern_sta(const std::vector<ThetaQPoint>& series);

enum class SweepProtocol { linear_response, sta };

const char* to_string(SweepProtocol p) noexcept;

struct SweepOptions {
  SweepProtocol protocol = SweepProtocol::sta;
  RunOptions run;
  // Concurrent workers; <= 0 means hardware concurrency.
  int jobs = 1;
};

struct SweepPoint {
  double chi = 0.0;
  std::optional<ChernResult> result;
  // "ok" or the error message of a failed point.
  std::string status = "ok";
  bool converged = false;
  int n_steps = 0;
  double min_pop = 1.0;
  double max_norm_drift = 0.0;
};

// One independent simulation per chi, returned in ascending chi order. A
// failing point is recorded and the sweep continues.
std::vector<SweepPoint> sweep_chi(const ModelParams& base, std::span<const double> chis,
                                  const SweepOptions& opt);

}  // namespace kno
