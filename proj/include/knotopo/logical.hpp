#pragma once

// The coherent-state qubit: |0> ~ |alpha0>, |1> ~ |-alpha0>, embedded in the
// truncated Fock space together with its projector and Pauli operators.

#include "knotopo/fock.hpp"

namespace kno {

enum class Orthogonalization { lowdin, raw };

const char* to_string(Orthogonalization o) noexcept;

class LogicalFrame {
 public:
  // Throws ill_conditioned_basis when |<-alpha0|alpha0>| >= 0.5 and
  // truncation_too_small when either coherent state leaks beyond max_leakage.
  static LogicalFrame build(double alpha0, int dim,
                            Orthogonalization orth = Orthogonalization::lowdin,
                            double max_leakage = kDefaultMaxLeakage);

  double alpha0() const noexcept { return alpha0_; }
  int dim() const noexcept { return ket0_.dim(); }
  Orthogonalization orthogonalization() const noexcept { return orth_; }

  const StateVector& ket0() const noexcept { return ket0_; }
  const StateVector& ket1() const noexcept { return ket1_; }

  // <-alpha0|alpha0> of the raw coherent states.
  double raw_overlap() const noexcept { return raw_overlap_; }

  const Operator& projector() const noexcept { return projector_; }
  const Operator& pauli_x() const noexcept { return sx_; }
  const Operator& pauli_y() const noexcept { return sy_; }
  const Operator& pauli_z() const noexcept { return sz_; }

  // (<0|psi>, <1|psi>)
  Eigen::Vector2cd project(const StateVector& psi) const;

  // Matrix elements <i|M|j> on the frame kets.
  Eigen::Matrix2cd block(const Operator& m) const;

 private:
  LogicalFrame(double alpha0, Orthogonalization orth, double overlap, StateVector k0,
               StateVector k1);

  double alpha0_;
  Orthogonalization orth_;
  double raw_overlap_;
  StateVector ket0_;
  StateVector ket1_;
  Operator projector_;
  Operator sx_;
  Operator sy_;
  Operator sz_;
};

struct BlochReading {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  // <psi|I_bar|psi>
  double pop = 0.0;

  double length() const;
  // Divides the Pauli expectations by pop (readout conditioned on no leakage).
  BlochReading renormalized() const;
};

// <psi|sigma_j|psi> on the full state (no renormalization) and the subspace
// population.
BlochReading bloch_vector(const StateVector& psi, const LogicalFrame& frame);

// 1 - <psi|I_bar|psi>
double leakage(const StateVector& psi, const LogicalFrame& frame);

}  // namespace kno
