#pragma once

// Hamiltonians of the driven Kerr nonlinear oscillator (KNO): the two-photon
// stabilizer H0, the logical drives Hx/Hy/Hz, the ramped topological
// Hamiltonian and its counterdiabatic (STA) extension.

#include <string>
#include <vector>

#include "knotopo/logical.hpp"

namespace kno {

enum class Schedule { linear, cosine };

// exact: Hx = -(sinh(2 a0^2) / a0^2) a^dag a, whose frame block is
//        -cosh(2 a0^2) I + sigma_x, i.e. the transverse field enters with the
//        same orientation as in the two-level Hamiltonian (1/2)[[Dz, W e^{-i phi}], ...].
// paper: Hx = (e^{2 a0^2} / |2 a0|) a^dag a; its off-diagonal frame
//        element is about -sqrt(2) for a0 = sqrt(2).
enum class HxPrefactor { exact, paper };

const char* to_string(Schedule s) noexcept;
const char* to_string(HxPrefactor p) noexcept;

// All frequencies in rad/us, times in us.
struct ModelParams {
  double kerr = 0.0;      // K
  double pump = 0.0;      // P
  double omega0 = 0.0;    // transverse drive scale
  double delta_z = 0.0;   // z-ramp amplitude
  double delta_0 = 0.0;   // manifold offset
  double tau = 0.0;       // protocol duration
  Schedule schedule = Schedule::linear;
  double phi = 0.0;
  HxPrefactor hx_prefactor = HxPrefactor::exact;
  int dim = 30;
  Orthogonalization orthogonalization = Orthogonalization::lowdin;

  // sqrt(P/K); never set independently.
  double alpha0() const;
  // delta_0 / delta_z. Throws invalid_argument when delta_z = 0 and delta_0 != 0.
  double chi() const;
  // Sets delta_0 = chi * delta_z.
  void set_chi(double chi);
  // e^{2 a0^2} omega0 / P. Values above kStabilizerWarn break the two-level
  // reduction.
  double stabilizer_ratio() const;

  // Throws invalid_argument on non-physical values (K, P, tau <= 0, dim < 2,
  // undefined chi).
  void validate() const;
};

inline constexpr double kStabilizerWarn = 0.2;

class RampSchedule {
 public:
  RampSchedule(Schedule shape, double tau);

  // linear: pi t / tau; cosine: (pi/2)(1 - cos(pi t / tau)).
  double theta(double t) const;
  double theta_dot(double t) const;

  Schedule shape() const noexcept { return shape_; }
  double tau() const noexcept { return tau_; }

 private:
  Schedule shape_;
  double tau_;
};

// -(K/2) a^dag^2 a^2 + (P/2)(a^dag^2 + a^2)
Operator h0(const ModelParams& p);
// (a^dag + a) / (2 a0)
Operator hz(const ModelParams& p);
Operator hx(const ModelParams& p);
// (-i / (2 a0)) e^{2 a0^2} (a^dag - a)
Operator hy(const ModelParams& p);

// Closed-form time derivative of Theta = arctan(sin(theta) / (cos(theta) + chi)):
// theta_dot (1 + chi cos(theta)) / (1 + 2 chi cos(theta) + chi^2).
// Valid for delta_z = omega0. Throws singular_cd at the on-manifold degeneracy.
double cd_coefficient(double theta, double theta_dot, double chi);

struct DriveAmplitudes {
  double delta_z;  // delta_z cos(theta) + delta_0
  double omega;    // omega0 sin(theta)
};

DriveAmplitudes drive_amplitudes(const ModelParams& p, double theta);

// Owns every time-independent operator of one parameter set so that
// total_hamiltonian only performs the weighted sum.
class KerrModel {
 public:
  explicit KerrModel(ModelParams params);

  const ModelParams& params() const noexcept { return params_; }
  const RampSchedule& schedule() const noexcept { return schedule_; }
  const LogicalFrame& frame() const noexcept { return frame_; }

  const Operator& h0() const noexcept { return h0_; }
  const Operator& hx() const noexcept { return hx_; }
  const Operator& hy() const noexcept { return hy_; }
  const Operator& hz() const noexcept { return hz_; }

  // H0 + (Dz/2) Hz + (W/2)(Hx cos(phi) + Hy sin(phi)) [+ (Theta_dot/2) sigma_y]
  // at time t in [0, tau]. The counterdiabatic term requires delta_z = omega0
  // and phi = 0.
  Operator total_hamiltonian(double t, bool sta) const;

  // Theta_dot at time t (delta_z = omega0 only).
  double cd_rate(double t) const;

 private:
  ModelParams params_;
  RampSchedule schedule_;
  LogicalFrame frame_;
  Operator h0_;
  Operator hx_;
  Operator hy_;
  Operator hz_;
};

}  // namespace kno
