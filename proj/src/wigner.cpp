#include "knotopo/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kno {

namespace {

constexpr int kMaxWorkingDim = 240;

int working_dimension(const StateVector& psi, double half_width) {
  // Largest displaced amplitude on the grid: the state's own radius plus the
  // grid corner.
  const Vector& v = psi.amplitudes();
  double mean_n = 0.0;
  for (Eigen::Index n = 0; n < v.size(); ++n) mean_n += n * std::norm(v[n]);
  mean_n /= std::max(v.squaredNorm(), 1e-300);
  const double beta = std::sqrt(mean_n) + std::numbers::sqrt2 * half_width;
  const int needed = static_cast<int>(std::ceil(beta * beta + 8.0 * beta + 16.0));
  return std::clamp(needed, psi.dim(), std::max(psi.dim(), kMaxWorkingDim));
}

}  // namespace

double WignerGrid::spacing() const { return axis.size() < 2 ? 0.0 : axis[1] - axis[0]; }

double WignerGrid::integrated_norm() const {
  const double h = spacing();
  return values.sum() * h * h;
}

int WignerGrid::low_confidence_count() const {
  return static_cast<int>(low_confidence.count());
}

WignerGrid wigner(const StateVector& psi, const GridSpec& spec, double leakage_threshold) {
  if (!(spec.half_width > 0.0)) throw Error(ErrorCode::invalid_argument, "grid half_width must be positive");
  if (spec.n_points < 41) throw Error(ErrorCode::invalid_argument, "grid needs at least 41 points per axis");

  const int n = spec.n_points;
  const int m = working_dimension(psi, spec.half_width);
  const int big = m + kDisplacementGuard;
  const double norm2 = psi.amplitudes().squaredNorm();

  WignerGrid grid;
  grid.working_dim = m;
  grid.axis.resize(n);
  for (int k = 0; k < n; ++k) grid.axis[k] = -spec.half_width + 2.0 * spec.half_width * k / (n - 1);
  grid.values.resize(n, n);
  grid.low_confidence.resize(n, n);

  // G = i(a^dag - a) is Hermitian and D(x) = exp(-i x G) for real x.
  const Matrix a = annihilation(big).matrix();
  const Matrix g = cplx(0.0, 1.0) * (a.adjoint() - a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::numerical, "wigner: eigendecomposition failed");
  const Matrix& vecs = es.eigenvectors();
  const Eigen::VectorXd& lambda = es.eigenvalues();

  // R = exp(i pi N / 2) rotates real displacements onto the imaginary axis:
  // D(i y) = R D(y) R^dag.
  Vector rot(big);
  for (int k = 0; k < big; ++k) rot[k] = std::polar(1.0, 0.5 * std::numbers::pi * k);

  Vector embedded = Vector::Zero(big);
  embedded.head(psi.dim()) = psi.amplitudes();

  // Columns chi_y = P_m D(-i y) psi for every row of the grid.
  const Vector u = vecs.adjoint() * rot.conjugate().cwiseProduct(embedded);
  Matrix phased(big, n);
  for (int r = 0; r < n; ++r) {
    const double y = grid.axis[r];
    for (int k = 0; k < big; ++k) phased(k, r) = u[k] * std::polar(1.0, y * lambda[k]);
  }
  Matrix chi = rot.asDiagonal() * (vecs * phased);
  chi.bottomRows(big - m).setZero();

  // phi_{x,y} = P_m D(-x) chi_y, evaluated column by column in x.
  const Matrix xi = vecs.adjoint() * chi;
  const Matrix top = vecs.topRows(m);
  Matrix scaled(big, n);
  for (int c = 0; c < n; ++c) {
    const double x = grid.axis[c];
    for (int k = 0; k < big; ++k) {
      const cplx e = std::polar(1.0, x * lambda[k]);
      scaled.row(k) = xi.row(k) * e;
    }
    const Matrix phi = top * scaled;
    for (int r = 0; r < n; ++r) {
      double parity_sum = 0.0;
      double kept = 0.0;
      for (int k = 0; k < m; ++k) {
        const double p = std::norm(phi(k, r));
        kept += p;
        parity_sum += (k % 2 == 0) ? p : -p;
      }
      grid.values(r, c) = 2.0 / std::numbers::pi * parity_sum;
      grid.low_confidence(r, c) = (norm2 - kept) > leakage_threshold * norm2;
    }
  }
  return grid;
}

double wigner_at(const StateVector& psi, cplx alpha) {
  const Operator d = displacement(-alpha, psi.dim());
  const StateVector phi(d.matrix() * psi.amplitudes());
  return 2.0 / std::numbers::pi * expectation(phi, parity(psi.dim())).real();
}

}  // namespace kno
