#include "knotopo/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace kno {

const char* to_string(Schedule s) noexcept {
  return s == Schedule::linear ? "linear" : "cosine";
}

const char* to_string(HxPrefactor p) noexcept {
  return p == HxPrefactor::exact ? "exact" : "paper";
}

double ModelParams::alpha0() const { return std::sqrt(pump / kerr); }

double ModelParams::chi() const {
  if (delta_z == 0.0) {
    if (delta_0 != 0.0) {
      throw Error(ErrorCode::invalid_argument, "chi undefined: delta_0 is set while delta_z = 0");
    }
    return 0.0;
  }
  return delta_0 / delta_z;
}

void ModelParams::set_chi(double chi) { delta_0 = chi * delta_z; }

double ModelParams::stabilizer_ratio() const {
  const double a0 = alpha0();
  return std::exp(2.0 * a0 * a0) * omega0 / pump;
}

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (!(kerr > 0.0) || !std::isfinite(kerr)) fail("K must be positive");
  if (!(pump > 0.0) || !std::isfinite(pump)) fail("P must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be positive");
  if (dim < 2) fail("dim must be >= 2");
  if (!std::isfinite(omega0) || !std::isfinite(delta_z) || !std::isfinite(delta_0) ||
      !std::isfinite(phi)) {
    fail("drive parameters must be finite");
  }
  (void)chi();
}

// --- ramp -------------------------------------------------------------------

RampSchedule::RampSchedule(Schedule shape, double tau) : shape_(shape), tau_(tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::invalid_argument, "ramp duration must be positive");
}

double RampSchedule::theta(double t) const {
  constexpr double pi = std::numbers::pi;
  if (shape_ == Schedule::linear) return pi * t / tau_;
  return 0.5 * pi * (1.0 - std::cos(pi * t / tau_));
}

double RampSchedule::theta_dot(double t) const {
  constexpr double pi = std::numbers::pi;
  if (shape_ == Schedule::linear) return pi / tau_;
  return 0.5 * pi * pi / tau_ * std::sin(pi * t / tau_);
}

// --- operators --------------------------------------------------------------

Operator h0(const ModelParams& p) {
  const int n = p.dim;
  if (n < 2) throw Error(ErrorCode::invalid_dimension, "dim must be >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    m(k, k) = -0.5 * p.kerr * k * (k - 1.0);
    if (k >= 2) {
      // <k-2|a^2|k> = sqrt(k(k-1)); a^dag^2 is the transpose.
      const double v = 0.5 * p.pump * std::sqrt(k * (k - 1.0));
      m(k - 2, k) = v;
      m(k, k - 2) = v;
    }
  }
  return Operator::hermitian(m.cast<cplx>());
}

Operator hz(const ModelParams& p) {
  const Matrix a = annihilation(p.dim).matrix();
  return Operator::hermitian((a + a.adjoint()) / (2.0 * p.alpha0()));
}

Operator hx(const ModelParams& p) {
  const double a0 = p.alpha0();
  const double n0 = a0 * a0;
  const double prefactor = p.hx_prefactor == HxPrefactor::exact
                               ? -std::sinh(2.0 * n0) / n0
                               : std::exp(2.0 * n0) / std::abs(2.0 * a0);
  return prefactor * number(p.dim);
}

Operator hy(const ModelParams& p) {
  const double a0 = p.alpha0();
  const Matrix a = annihilation(p.dim).matrix();
  const cplx scale = cplx(0.0, -1.0) * std::exp(2.0 * a0 * a0) / (2.0 * a0);
  return Operator::hermitian(scale * (a.adjoint() - a));
}

double cd_coefficient(double theta, double theta_dot, double chi) {
  const double c = std::cos(theta);
  const double denom = 1.0 + 2.0 * chi * c + chi * chi;
  if (std::abs(denom) <= 1e-14) {
    std::ostringstream os;
    os << "counterdiabatic rate is singular at theta = " << theta << ", chi = " << chi
       << " (degeneracy on the manifold)";
    throw Error(ErrorCode::singular_cd, os.str());
  }
  return theta_dot * (1.0 + chi * c) / denom;
}

DriveAmplitudes drive_amplitudes(const ModelParams& p, double theta) {
  return {p.delta_z * std::cos(theta) + p.delta_0, p.omega0 * std::sin(theta)};
}

// --- KerrModel --------------------------------------------------------------

KerrModel::KerrModel(ModelParams params)
    : params_((params.validate(), params)),
      schedule_(params_.schedule, params_.tau),
      frame_(LogicalFrame::build(params_.alpha0(), params_.dim, params_.orthogonalization)),
      h0_(kno::h0(params_)),
      hx_(kno::hx(params_)),
      hy_(kno::hy(params_)),
      hz_(kno::hz(params_)) {}

double KerrModel::cd_rate(double t) const {
  const double scale = std::max(std::abs(params_.delta_z), std::abs(params_.omega0));
  if (std::abs(params_.delta_z - params_.omega0) > 1e-9 * scale) {
    throw Error(ErrorCode::invalid_argument,
                "counterdiabatic drive requires delta_z = omega0");
  }
  if (params_.phi != 0.0) {
    throw Error(ErrorCode::invalid_argument, "counterdiabatic drive requires phi = 0");
  }
  return cd_coefficient(schedule_.theta(t), schedule_.theta_dot(t), params_.chi());
}

Operator KerrModel::total_hamiltonian(double t, bool sta) const {
  const double tau = params_.tau;
  // Tolerate round-off at the endpoints of the step grid.
  if (!(t >= -1e-12 * tau && t <= tau * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "total_hamiltonian: t = " << t << " outside [0, " << tau << "]";
    throw Error(ErrorCode::out_of_range, os.str());
  }
  const double theta = schedule_.theta(t);
  const DriveAmplitudes d = drive_amplitudes(params_, theta);
  Matrix h = h0_.matrix();
  h += (0.5 * d.delta_z) * hz_.matrix();
  const double wx = 0.5 * d.omega * std::cos(params_.phi);
  const double wy = 0.5 * d.omega * std::sin(params_.phi);
  if (wx != 0.0) h += wx * hx_.matrix();
  if (wy != 0.0) h += wy * hy_.matrix();
  if (sta) h += (0.5 * cd_rate(t)) * frame_.pauli_y().matrix();
  return Operator::hermitian(std::move(h));
}

}  // namespace kno
