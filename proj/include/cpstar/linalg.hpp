#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cpstar/errors.hpp"
#include "cpstar/tensor.hpp"

// Dense complex linear algebra on top of Eigen. Only the complex model
// reaches this layer.
namespace cpstar {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline Matrix to_matrix(const ComplexTensor& t) {
  Eigen::Map<const detail::RowMatrix> m(t.entries().data(), t.rows(), t.cols());
  return Matrix(m);
}

inline ComplexTensor from_matrix(const Matrix& m, Legs rows, Legs cols) {
  if (leg_product(rows) != static_cast<std::size_t>(m.rows()) ||
      leg_product(cols) != static_cast<std::size_t>(m.cols())) {
    throw ShapeMismatch("from_matrix: legs do not match matrix size");
  }
  ComplexTensor out(std::move(rows), std::move(cols));
  Eigen::Map<detail::RowMatrix> dst(out.entries().data(), out.rows(), out.cols());
  dst = m;
  return out;
}

inline ComplexTensor square_from_matrix(const Matrix& m) {
  return from_matrix(m, {static_cast<std::size_t>(m.rows())}, {static_cast<std::size_t>(m.cols())});
}

inline Vector to_vector(const ComplexTensor& state) {
  if (state.cols() != 1) throw ShapeMismatch("to_vector: expected a state");
  Vector v(static_cast<Eigen::Index>(state.rows()));
  for (std::size_t i = 0; i < state.rows(); ++i) v(static_cast<Eigen::Index>(i)) = state(i, 0);
  return v;
}

inline ComplexTensor state_from_vector(const Vector& v) {
  ComplexTensor out({static_cast<std::size_t>(v.size())}, {});
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, 0) = v(static_cast<Eigen::Index>(i));
  return out;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct PsdReport {
  bool psd = false;
  double hermitian_residual = 0.0;
  double min_eigenvalue = 0.0;
  Vector min_eigenvector;
  Eigen::VectorXd eigenvalues;
};

// Spectrum of the Hermitian part; psd iff Hermitian within tol.eq and every
// eigenvalue >= -tol.eig.
inline PsdReport psd_report(const Matrix& m, Tolerance tol = {}) {
  if (m.rows() != m.cols()) throw ShapeMismatch("psd test needs a square matrix");
  PsdReport report;
  if (m.rows() == 0) {
    report.psd = true;
    return report;
  }
  report.hermitian_residual = max_abs(m - m.adjoint());
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  report.eigenvalues = eig.eigenvalues();
  report.min_eigenvalue = eig.eigenvalues()(0);
  report.min_eigenvector = eig.eigenvectors().col(0);
  report.psd = report.hermitian_residual <= tol.eq && report.min_eigenvalue >= -tol.eig;
  return report;
}

inline bool is_psd(const ComplexTensor& a, Tolerance tol = {}) {
  if (a.row_legs() != a.col_legs()) throw ShapeMismatch("is_psd: tensor is not square");
  return psd_report(to_matrix(a), tol).psd;
}

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

// Square root of the Hermitian part with negative eigenvalues clipped to zero.
inline Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m));
  Eigen::VectorXd s = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * s.asDiagonal() * eig.eigenvectors().adjoint();
}

struct KernelResult {
  Matrix basis;  // orthonormal columns
  Eigen::VectorXd singular_values;
  double cut = 0.0;
};

// Null space by SVD. Singular values below sqrt(tol)*scale count as zero;
// anything within a factor of ten of that cut is reported as ambiguous.
inline KernelResult kernel(const Matrix& m, double tol) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  KernelResult out;
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.size() ? out.singular_values(0) : 0.0;
  out.cut = std::sqrt(tol) * std::max(1.0, top);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
    const double s = out.singular_values(i);
    if (s > out.cut / 10.0 && s < out.cut * 10.0) {
      throw NumericalAmbiguity("kernel: singular value " + std::to_string(s) + " too close to the rank cut " +
                               std::to_string(out.cut));
    }
    if (s >= out.cut) ++rank;
  }
  out.basis = svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

// Group ascending eigenvalues into clusters separated by more than `gap`.
inline std::vector<std::vector<Eigen::Index>> cluster_ascending(const Eigen::VectorXd& values, double gap) {
  std::vector<std::vector<Eigen::Index>> clusters;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (clusters.empty() || values(i) - values(i - 1) > gap) clusters.emplace_back();
    clusters.back().push_back(i);
  }
  return clusters;
}

inline Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

// Haar-distributed unitary via QR with phase correction.
inline Matrix random_unitary(Eigen::Index n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a == 0.0 ? Complex(1.0) : d / a);
  }
  return q;
}

}  // namespace cpstar
