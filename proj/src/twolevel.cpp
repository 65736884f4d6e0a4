#include "knotopo/twolevel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stepping.hpp"

namespace kno::twolevel {

namespace {

const Eigen::Matrix2cd& pauli_x() {
  static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  return m;
}

const Eigen::Matrix2cd& pauli_y() {
  static const Eigen::Matrix2cd m =
      (Eigen::Matrix2cd() << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  return m;
}

double solid_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  // Van Oosterom & Strackee: signed solid angle of triangle (a, b, c) seen
  // from the origin.
  const double la = a.norm();
  const double lb = b.norm();
  const double lc = c.norm();
  const double num = a.dot(b.cross(c));
  const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
  return 2.0 * std::atan2(num, den);
}

double enclosed_flux(double chi, double aspect, int n_theta, int n_phi) {
  constexpr double pi = std::numbers::pi;
  auto vertex = [&](int i, int j) {
    const double th = pi * i / n_theta;
    const double ph = 2.0 * pi * j / n_phi;
    return Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                           aspect * (std::cos(th) + chi));
  };
  double total = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const Eigen::Vector3d v00 = vertex(i, j);
      const Eigen::Vector3d v10 = vertex(i + 1, j);
      const Eigen::Vector3d v11 = vertex(i + 1, j + 1);
      const Eigen::Vector3d v01 = vertex(i, j + 1);
      total += solid_angle(v00, v10, v11) + solid_angle(v00, v11, v01);
    }
  }
  return total / (4.0 * pi);
}

}  // namespace

Eigen::Matrix2cd hamiltonian(double delta_z, double omega, double phi) {
  Eigen::Matrix2cd h;
  h << delta_z, omega * std::polar(1.0, -phi), omega * std::polar(1.0, phi), -delta_z;
  return 0.5 * h;
}

Eigensystem eigensystem(double delta_z, double omega, double phi) {
  if (delta_z == 0.0 && omega == 0.0) {
    throw Error(ErrorCode::degenerate_hamiltonian, "two-level Hamiltonian is degenerate (Dz = W = 0)");
  }
  const double e = 0.5 * std::hypot(delta_z, omega);
  const double theta = std::atan2(omega, delta_z);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigensystem es;
  es.e_plus = e;
  es.e_minus = -e;
  es.mixing_angle = theta;
  es.excited = Eigen::Vector2cd(c, std::polar(s, phi));
  es.ground = Eigen::Vector2cd(-std::polar(s, -phi), c);
  return es;
}

double mixing_rate(const ModelParams& p, const RampSchedule& ramp, double t) {
  const double th = ramp.theta(t);
  const double thd = ramp.theta_dot(t);
  const DriveAmplitudes d = drive_amplitudes(p, th);
  const double dz_dot = -p.delta_z * std::sin(th) * thd;
  const double w_dot = p.omega0 * std::cos(th) * thd;
  const double r2 = d.delta_z * d.delta_z + d.omega * d.omega;
  if (r2 == 0.0) {
    throw Error(ErrorCode::singular_cd, "mixing rate undefined at the degeneracy point");
  }
  return (d.delta_z * w_dot - d.omega * dz_dot) / r2;
}

Trajectory reference_dynamics(const ModelParams& p, const ReferenceOptions& opt) {
  p.validate();
  if (opt.initial == InitialState::custom) {
    throw Error(ErrorCode::invalid_argument, "reference_dynamics supports ket0 / ket1 only");
  }
  const RampSchedule ramp(p.schedule, p.tau);
  const detail::StepGrid grid = detail::make_grid(opt.n_steps, opt.n_samples);

  Vector psi = Vector::Zero(2);
  psi[opt.initial == InitialState::ket0 ? 0 : 1] = 1.0;

  Trajectory traj;
  traj.samples.resize(opt.n_samples);
  traj.n_steps = grid.n_steps();
  traj.initial = opt.initial;
  traj.sta = opt.sta;
  traj.converged = true;

  const Eigen::Matrix2cd cd_axis = std::cos(p.phi) * pauli_y() - std::sin(p.phi) * pauli_x();

  auto step = [&](double t, double dt) {
    const DriveAmplitudes d = drive_amplitudes(p, ramp.theta(t));
    Matrix h = hamiltonian(d.delta_z, d.omega, p.phi);
    if (opt.sta) h += 0.5 * mixing_rate(p, ramp, t) * cd_axis;
    psi = propagate_step(Operator::hermitian(std::move(h)), StateVector(psi), dt).amplitudes();
  };
  auto record = [&](int k, double t) {
    const cplx cross = std::conj(psi[0]) * psi[1];
    Sample& s = traj.samples[k];
    s.t = t;
    s.theta = ramp.theta(t);
    s.sx = 2.0 * cross.real();
    s.sy = 2.0 * cross.imag();
    s.sz = std::norm(psi[0]) - std::norm(psi[1]);
    s.pop = psi.squaredNorm();
    s.norm = psi.norm();
  };
  detail::integrate(p.tau, grid, step, record);
  return traj;
}

double monopole_chern(double chi, double aspect) {
  if (std::abs(chi) == 1.0) {
    throw Error(ErrorCode::on_manifold_degeneracy,
                "degeneracy lies on the manifold (|chi| = 1); Chern number undefined");
  }
  if (!(aspect > 0.0)) throw Error(ErrorCode::invalid_argument, "aspect must be positive");
  int n = 200;
  double prev = enclosed_flux(chi, aspect, n, n);
  for (int refinements = 0; refinements < 5; ++refinements) {
    n *= 2;
    const double next = enclosed_flux(chi, aspect, n, n);
    if (std::abs(next - prev) < 1e-6) return next;
    prev = next;
  }
  return prev;
}

}  // namespace kno::twolevel
