#include "knotopo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kno {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::truncation_too_small: return "truncation-too-small";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::ill_conditioned_basis: return "ill-conditioned-basis";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::singular_cd: return "singular-cd";
    case ErrorCode::degenerate_hamiltonian: return "degenerate-hamiltonian";
    case ErrorCode::insufficient_sampling: return "insufficient-sampling";
    case ErrorCode::degenerate_readout: return "degenerate-readout";
    case ErrorCode::on_manifold_degeneracy: return "on-manifold-degeneracy";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::usage: return "usage";
  }
  return "unknown";
}

namespace {

void require_dim(int dim) {
  if (dim < 2) {
    throw Error(ErrorCode::invalid_dimension,
                "Fock dimension must be >= 2, got " + std::to_string(dim));
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

// Eigendecomposition-based exp(-i H dt) applied to a vector. Real symmetric
// Hamiltonians take the cheaper real solver.
Vector apply_unitary(const Matrix& h, const Vector& v, double dt) {
  if (!h.allFinite()) {
    throw Error(ErrorCode::numerical, "propagate_step: Hamiltonian has non-finite entries");
  }
  const bool real = h.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
    if (es.info() != Eigen::Success) {
      std::ostringstream os;
      os << "propagate_step: real eigendecomposition failed (dim " << h.rows()
         << ", max|H| " << h.cwiseAbs().maxCoeff() << ")";
      throw Error(ErrorCode::numerical, os.str());
    }
    const Eigen::MatrixXd& vecs = es.eigenvectors();
    Vector c = vecs.transpose().cast<cplx>() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      c[k] *= std::polar(1.0, -es.eigenvalues()[k] * dt);
    }
    return vecs.cast<cplx>() * c;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "propagate_step: eigendecomposition failed (dim " << h.rows()
       << ", max|H| " << h.cwiseAbs().maxCoeff() << ")";
    throw Error(ErrorCode::numerical, os.str());
  }
  const Matrix& vecs = es.eigenvectors();
  Vector c = vecs.adjoint() * v;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    c[k] *= std::polar(1.0, -es.eigenvalues()[k] * dt);
  }
  return vecs * c;
}

}  // namespace

// --- Operator ---------------------------------------------------------------

Operator::Operator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorCode::invalid_dimension, "Operator matrix must be square");
  }
  require_dim(static_cast<int>(m_.rows()));
}

Operator Operator::hermitian(Matrix m) {
  Operator op(std::move(m));
  const double scale = std::max(1.0, op.m_.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(op.m_);
  if (defect > 1e-12 * scale) {
    std::ostringstream os;
    os << "Operator is not Hermitian: max|M - M^dag| = " << defect;
    throw Error(ErrorCode::numerical, os.str());
  }
  Matrix sym = 0.5 * (op.m_ + op.m_.adjoint());
  return Operator(std::move(sym), true);
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), hermitian_); }

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "operator+");
  return Operator(a.m_ + b.m_, a.hermitian_ && b.hermitian_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "operator-");
  return Operator(a.m_ - b.m_, a.hermitian_ && b.hermitian_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim(), "operator*");
  return Operator(a.m_ * b.m_);
}

Operator operator*(double s, const Operator& a) { return Operator(s * a.m_, a.hermitian_); }

Operator operator*(cplx s, const Operator& a) {
  return Operator(s * a.m_, a.hermitian_ && s.imag() == 0.0);
}

// --- StateVector ------------------------------------------------------------

StateVector::StateVector(Vector amplitudes) : v_(std::move(amplitudes)) {
  if (v_.size() < 1) {
    throw Error(ErrorCode::invalid_dimension, "StateVector must be non-empty");
  }
}

StateVector StateVector::basis(int dim, int n) {
  require_dim(dim);
  if (n < 0 || n >= dim) {
    throw Error(ErrorCode::out_of_range, "Fock level outside truncation");
  }
  Vector v = Vector::Zero(dim);
  v[n] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::normalized() const {
  const double n = v_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::numerical, "cannot normalize a zero or non-finite state");
  }
  return StateVector(v_ / n);
}

// --- canonical operators ----------------------------------------------------

Operator annihilation(int dim) {
  require_dim(dim);
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(m));
}

Operator creation(int dim) { return annihilation(dim).adjoint(); }

Operator number(int dim) {
  require_dim(dim);
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return Operator::hermitian(std::move(m));
}

Operator parity(int dim) {
  require_dim(dim);
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return Operator::hermitian(std::move(m));
}

Operator identity(int dim) {
  require_dim(dim);
  return Operator::hermitian(Matrix::Identity(dim, dim));
}

// --- coherent states and displacement ---------------------------------------

CoherentState coherent_state(cplx alpha, int dim, double max_leakage) {
  require_dim(dim);
  Vector c(dim);
  // Recurrence c_n = c_{n-1} alpha / sqrt(n) avoids factorial overflow.
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  const double kept = c.squaredNorm();
  const double leakage = std::max(0.0, 1.0 - kept);
  if (leakage > max_leakage) {
    std::ostringstream os;
    os << "coherent state |" << alpha << "> leaks " << leakage << " beyond dim " << dim
       << " (threshold " << max_leakage << "; recommended dim >= "
       << recommended_dim(std::abs(alpha)) << ")";
    throw Error(ErrorCode::truncation_too_small, os.str());
  }
  return {StateVector(c / std::sqrt(kept)), leakage};
}

int recommended_dim(double abs_alpha) {
  return static_cast<int>(std::ceil(abs_alpha * abs_alpha + 6.0 * abs_alpha + 9.0));
}

Operator displacement(cplx alpha, int dim) {
  require_dim(dim);
  const int big = dim + kDisplacementGuard;
  const Matrix a = annihilation(big).matrix();
  // alpha a^dag - alpha^* a is anti-Hermitian; G = -i(...) is Hermitian and
  // D = exp(i G).
  const Matrix g = cplx(0.0, -1.0) * (alpha * a.adjoint() - std::conj(alpha) * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.adjoint()));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical, "displacement: eigendecomposition failed");
  }
  Vector phases(big);
  for (int k = 0; k < big; ++k) phases[k] = std::polar(1.0, es.eigenvalues()[k]);
  const Matrix full = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return Operator(full.topLeftCorner(dim, dim));
}

// --- propagation and readout ------------------------------------------------

StateVector propagate_step(const Operator& h, const StateVector& psi, double dt) {
  if (!h.is_hermitian()) {
    throw Error(ErrorCode::invalid_argument, "propagate_step requires a Hermitian-flagged operator");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "propagate_step requires dt > 0");
  require_same_dim(h.dim(), psi.dim(), "propagate_step");
  return StateVector(apply_unitary(h.matrix(), psi.amplitudes(), dt));
}

cplx expectation(const StateVector& psi, const Operator& m) {
  require_same_dim(m.dim(), psi.dim(), "expectation");
  const cplx value = psi.amplitudes().dot(m.matrix() * psi.amplitudes());
  if (m.is_hermitian()) {
    const double scale = std::max(1.0, m.matrix().cwiseAbs().maxCoeff());
    if (std::abs(value.imag()) > 1e-9 * scale) {
      std::ostringstream os;
      os << "expectation of Hermitian operator has imaginary part " << value.imag();
      throw Error(ErrorCode::numerical, os.str());
    }
    return {value.real(), 0.0};
  }
  return value;
}

cplx inner(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

double edge_population(const StateVector& psi, int width) {
  const int n = psi.dim();
  const int w = std::clamp(width, 0, n);
  return psi.amplitudes().tail(w).squaredNorm();
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace kno
