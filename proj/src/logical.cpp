#include "knotopo/logical.hpp"

#include <cmath>
#include <sstream>

namespace kno {

const char* to_string(Orthogonalization o) noexcept {
  return o == Orthogonalization::lowdin ? "lowdin" : "raw";
}

namespace {

Matrix dyad(const StateVector& u, const StateVector& v) {
  return u.amplitudes() * v.amplitudes().adjoint();
}

}  // namespace

LogicalFrame::LogicalFrame(double alpha0, Orthogonalization orth, double overlap,
                           StateVector k0, StateVector k1)
    : alpha0_(alpha0),
      orth_(orth),
      raw_overlap_(overlap),
      ket0_(std::move(k0)),
      ket1_(std::move(k1)),
      projector_(Operator::hermitian(dyad(ket0_, ket0_) + dyad(ket1_, ket1_))),
      sx_(Operator::hermitian(dyad(ket0_, ket1_) + dyad(ket1_, ket0_))),
      sy_(Operator::hermitian(cplx(0.0, -1.0) * dyad(ket0_, ket1_) +
                              cplx(0.0, 1.0) * dyad(ket1_, ket0_))),
      sz_(Operator::hermitian(dyad(ket0_, ket0_) - dyad(ket1_, ket1_))) {}

LogicalFrame LogicalFrame::build(double alpha0, int dim, Orthogonalization orth,
                                 double max_leakage) {
  if (!(std::abs(alpha0) > 0.0) || !std::isfinite(alpha0)) {
    throw Error(ErrorCode::invalid_argument, "alpha0 must be a nonzero finite real");
  }
  const StateVector plus = coherent_state(alpha0, dim, max_leakage).state;
  const StateVector minus = coherent_state(-alpha0, dim, max_leakage).state;
  const cplx s = inner(plus, minus);
  if (std::abs(s) >= 0.5) {
    std::ostringstream os;
    os << "coherent-state overlap |<-a0|a0>| = " << std::abs(s)
       << " >= 0.5; the qubit encoding is ill-conditioned";
    throw Error(ErrorCode::ill_conditioned_basis, os.str());
  }
  if (orth == Orthogonalization::raw) {
    return LogicalFrame(alpha0, orth, s.real(), plus, minus);
  }

  // Symmetric orthonormalization [k0 k1] = [c0 c1] S^{-1/2}.
  Eigen::Matrix2cd overlap;
  overlap << 1.0, s, std::conj(s), 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(overlap);
  const Eigen::Vector2d inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const Eigen::Matrix2cd s_inv_half =
      es.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();

  Matrix raw(dim, 2);
  raw.col(0) = plus.amplitudes();
  raw.col(1) = minus.amplitudes();
  const Matrix ortho = raw * s_inv_half;
  return LogicalFrame(alpha0, orth, s.real(), StateVector(ortho.col(0)),
                      StateVector(ortho.col(1)));
}

Eigen::Vector2cd LogicalFrame::project(const StateVector& psi) const {
  return {inner(ket0_, psi), inner(ket1_, psi)};
}

Eigen::Matrix2cd LogicalFrame::block(const Operator& m) const {
  if (m.dim() != dim()) {
    throw Error(ErrorCode::dimension_mismatch, "LogicalFrame::block: dimension mismatch");
  }
  Matrix kets(dim(), 2);
  kets.col(0) = ket0_.amplitudes();
  kets.col(1) = ket1_.amplitudes();
  return kets.adjoint() * m.matrix() * kets;
}

double BlochReading::length() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }

BlochReading BlochReading::renormalized() const {
  if (!(pop > 0.0)) {
    throw Error(ErrorCode::degenerate_readout, "cannot renormalize: zero subspace population");
  }
  return {sx / pop, sy / pop, sz / pop, 1.0};
}

BlochReading bloch_vector(const StateVector& psi, const LogicalFrame& frame) {
  if (psi.dim() != frame.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "bloch_vector: dimension mismatch");
  }
  // Every frame operator is a sum of dyads |i><j|, so its expectation is a
  // bilinear form in c_i = <i|psi>.
  const Eigen::Vector2cd c = frame.project(psi);
  const cplx cross = std::conj(c[0]) * c[1];
  BlochReading r;
  r.sx = 2.0 * cross.real();
  r.sy = 2.0 * cross.imag();
  r.sz = std::norm(c[0]) - std::norm(c[1]);
  r.pop = std::norm(c[0]) + std::norm(c[1]);
  return r;
}

double leakage(const StateVector& psi, const LogicalFrame& frame) {
  return 1.0 - bloch_vector(psi, frame).pop;
}

}  // namespace kno
