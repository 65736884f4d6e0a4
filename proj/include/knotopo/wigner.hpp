#pragma once

// Wigner-function tomography W(alpha) = (2/pi) <psi| D_alpha P D_alpha^dag |psi>.

#include <vector>

#include "knotopo/fock.hpp"

namespace kno {

struct GridSpec {
  double half_width = 4.5;
  int n_points = 81;
};

struct WignerGrid {
  // Shared uniform axis for Re(alpha) and Im(alpha).
  std::vector<double> axis;
  // values(i, j) = W(axis[j] + i axis[i]); rows follow Im(alpha).
  Eigen::MatrixXd values;
  // Cells whose displaced state leaked out of the working space.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> low_confidence;
  // Fock dimension used for the displaced states.
  int working_dim = 0;

  double spacing() const;
  // sum W dA over the grid.
  double integrated_norm() const;
  int low_confidence_count() const;
};

// Requires half_width > 0 and n_points >= 41; GridSpec defaults match the
// standard snapshot grid. Cells whose displaced state loses more than
// leakage_threshold of its norm to truncation are flagged.
WignerGrid wigner(const StateVector& psi, const GridSpec& spec = {},
                  double leakage_threshold = 1e-6);

// Single-point evaluation on the state's own dimension via fock::displacement.
double wigner_at(const StateVector& psi, cplx alpha);

}  // namespace kno
