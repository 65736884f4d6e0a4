#pragma once

// Truncated Fock-space linear algebra: ladder operators, coherent states,
// displacement and parity, and the Hermitian propagation kernel.
//
// All matrices are dense and double precision. Hamiltonians are angular
// frequencies in rad/us and time is in us (hbar = 1).

#include <complex>
#include <Eigen/Dense>

#include "knotopo/error.hpp"

namespace kno {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Guard band used when exponentiating generators that couple to the top of
// the truncated space (displacement). The exponential is taken on
// dim + kDisplacementGuard and cropped back to dim.
inline constexpr int kDisplacementGuard = 10;

// Default leakage threshold for coherent_state.
inline constexpr double kDefaultMaxLeakage = 1e-8;

class Operator {
 public:
  // Throws invalid_dimension unless m is square with at least two rows.
  explicit Operator(Matrix m);

  // Checks max|M - M^dag| against a scale-aware tolerance, then stores the
  // exactly Hermitian part. Throws numerical if the check fails.
  static Operator hermitian(Matrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  bool is_hermitian() const noexcept { return hermitian_; }

  Operator adjoint() const;

  // Hermiticity is preserved by sums of Hermitian operators and by real scaling.
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(double s, const Operator& a);
  friend Operator operator*(cplx s, const Operator& a);

 private:
  Operator(Matrix m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {}

  Matrix m_;
  bool hermitian_ = false;
};

class StateVector {
 public:
  explicit StateVector(Vector amplitudes);

  // Fock basis state |n> in a dim-dimensional space.
  static StateVector basis(int dim, int n);

  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const Vector& amplitudes() const noexcept { return v_; }
  double norm() const { return v_.norm(); }

  // Throws numerical for a zero vector.
  StateVector normalized() const;

 private:
  Vector v_;
};

Operator annihilation(int dim);
Operator creation(int dim);
Operator number(int dim);
Operator parity(int dim);
Operator identity(int dim);

struct CoherentState {
  StateVector state;
  // 1 - sum |c_n|^2 over the retained Fock levels, before renormalization.
  double leakage;
};

// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), renormalized after truncation.
// Throws truncation_too_small when the leakage exceeds max_leakage.
CoherentState coherent_state(cplx alpha, int dim,
                             double max_leakage = kDefaultMaxLeakage);

// Smallest dimension for which |alpha|^2 + 6|alpha| + 9 <= dim.
int recommended_dim(double abs_alpha);

// D(alpha) = exp(alpha a^dag - alpha^* a), exponentiated on
// dim + kDisplacementGuard and cropped to dim.
Operator displacement(cplx alpha, int dim);

// exp(-i H dt) psi through the eigendecomposition of H. Requires a
// Hermitian-flagged H and dt > 0.
StateVector propagate_step(const Operator& h, const StateVector& psi, double dt);

// <psi|M|psi>. For Hermitian-flagged M the imaginary part is checked against
// 1e-9 (scaled by the operator norm) and dropped.
cplx expectation(const StateVector& psi, const Operator& m);

cplx inner(const StateVector& a, const StateVector& b);

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

// Population in the top `width` Fock levels.
double edge_population(const StateVector& psi, int width = 3);

// Largest entry of |M - M^dag|.
double hermiticity_defect(const Matrix& m);

}  // namespace kno
