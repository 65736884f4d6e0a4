#pragma once

#include <stdexcept>
#include <string>

namespace kno {

// Error categories shared by every module. The numeric values are part of the
// C API (see knotopo.h) and must stay in sync with kno_status.
enum class ErrorCode : int {
  invalid_dimension = 1,
  truncation_too_small = 2,
  numerical = 3,
  dimension_mismatch = 4,
  ill_conditioned_basis = 5,
  out_of_range = 6,
  singular_cd = 7,
  degenerate_hamiltonian = 8,
  insufficient_sampling = 9,
  degenerate_readout = 10,
  on_manifold_degeneracy = 11,
  invalid_argument = 12,
  config = 13,
  io = 14,
  usage = 15,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kno
