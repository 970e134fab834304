#pragma once

#include <vector>

#include "cpstar/frobenius.hpp"
#include "cpstar/linalg.hpp"

namespace cpstar {

// Matrix of L_x on the carrier.
inline Matrix left_matrix(const ComplexAlgebra& a, const Vector& x) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix out = Matrix::Zero(d, d);
  const ComplexTensor& mu = a.mult();
  for (Eigen::Index b = 0; b < d; ++b) {
    const Complex xb = x(b);
    if (xb == Complex(0.0)) continue;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        out(i, j) += xb * mu(static_cast<std::size_t>(i), static_cast<std::size_t>(b * d + j));
  }
  return out;
}

inline Matrix right_matrix(const ComplexAlgebra& a, const Vector& x) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix out = Matrix::Zero(d, d);
  const ComplexTensor& mu = a.mult();
  for (Eigen::Index b = 0; b < d; ++b) {
    const Complex xb = x(b);
    if (xb == Complex(0.0)) continue;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        out(i, j) += xb * mu(static_cast<std::size_t>(i), static_cast<std::size_t>(j * d + b));
  }
  return out;
}

inline Vector product(const ComplexAlgebra& a, const Vector& x, const Vector& y) { return left_matrix(a, x) * y; }

// Orthonormal basis (as columns) of {x | xb = bx for all b}.
inline Matrix center_matrix(const ComplexAlgebra& a, double tol = Tolerance{}.eq) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix stacked(d * d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    Vector e = Vector::Zero(d);
    e(b) = 1.0;
    stacked.block(b * d, 0, d, d) = left_matrix(a, e) - right_matrix(a, e);
  }
  return kernel(stacked, tol).basis;
}

inline std::vector<ComplexTensor> center(const ComplexAlgebra& a, double tol = Tolerance{}.eq) {
  const Matrix z = center_matrix(a, tol);
  std::vector<ComplexTensor> out;
  for (Eigen::Index j = 0; j < z.cols(); ++j) out.push_back(state_from_vector(z.col(j)));
  return out;
}

}  // namespace cpstar
