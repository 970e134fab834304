#pragma once

#include <string>

#include "cpstar/center.hpp"
#include "cpstar/frobenius.hpp"

namespace cpstar {

struct NormaliserResiduals {
  double centrality = 0.0;
  double normalisation = 0.0;  // loop trace o z^2 vs counit
  double min_eigenvalue = 0.0;
};

inline NormaliserResiduals normaliser_residuals(const ComplexAlgebra& a, const ComplexTensor& z) {
  require_operator(a, z);
  NormaliserResiduals r;
  const ComplexTensor after = contract(z, a.mult());
  r.centrality = std::max(max_deviation(compose_at_input(a.mult(), z, 0), after),
                          max_deviation(compose_at_input(a.mult(), z, 1), after));
  r.normalisation = max_deviation(contract(loop_trace(a), contract(z, z)), a.counit());
  r.min_eigenvalue = psd_report(to_matrix(z)).min_eigenvalue;
  return r;
}

// Central positive-definite z with (loop trace) o z^2 = counit. The central
// element w with L_w = z^2 is found by a linear solve on the center; z is the
// PSD square root of L_w.
inline ComplexTensor solve_normaliser(const ComplexAlgebra& a, double tol = Tolerance{}.eq) {
  const AxiomReport report = verify_axioms(a, tol);
  if (!report.is_frobenius()) throw NotAnAlgebra("solve_normaliser: structure is not a Frobenius algebra");
  const auto d = static_cast<Eigen::Index>(a.dim());

  const Matrix basis = center_matrix(a, tol);
  const ComplexTensor tau = loop_trace(a);
  Eigen::RowVectorXcd tau_row(d);
  Vector eps(d);
  for (Eigen::Index x = 0; x < d; ++x) {
    tau_row(x) = tau(0, static_cast<std::size_t>(x));
    eps(x) = std::conj(a.unit()(static_cast<std::size_t>(x), 0));
  }

  // Column i: x -> tau(c_i . x)
  Matrix system(d, basis.cols());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) system.col(i) = (tau_row * left_matrix(a, basis.col(i))).transpose();
  const Vector alpha = system.completeOrthogonalDecomposition().solve(eps);
  const double solve_residual = max_abs(system * alpha - eps);
  if (!(solve_residual <= std::sqrt(tol) * std::max(1.0, max_abs(eps)))) {
    throw NoNormaliser("solve_normaliser: no central solution (residual " + std::to_string(solve_residual) + ")");
  }

  const Matrix lw = left_matrix(a, basis * alpha);
  const PsdReport spec = psd_report(lw, {std::sqrt(tol), 0.0});
  if (spec.hermitian_residual > std::sqrt(tol) || spec.min_eigenvalue <= tol) {
    throw NoNormaliser("solve_normaliser: z^2 is not positive definite (min eigenvalue " +
                       std::to_string(spec.min_eigenvalue) + ")");
  }
  const ComplexTensor z = square_from_matrix(psd_sqrt(lw));

  const NormaliserResiduals check = normaliser_residuals(a, z);
  const double loose = std::sqrt(tol);
  if (check.centrality > loose || check.normalisation > loose || check.min_eigenvalue <= 0.0) {
    throw NoNormaliser("solve_normaliser: candidate fails verification (centrality " +
                       std::to_string(check.centrality) + ", normalisation " + std::to_string(check.normalisation) +
                       ")");
  }
  return z;
}

inline ComplexAlgebra with_solved_normaliser(const ComplexAlgebra& a, double tol = Tolerance{}.eq) {
  return a.with_normaliser(solve_normaliser(a, tol));
}

// Tr over the left leg equals Tr over the right leg for symmetric algebras.
template <ScalarModel M>
double symmetric_trace_residual(const FrobeniusAlgebra<M>& a) {
  return max_deviation(loop_trace(a), right_loop_trace(a));
}

// counit(xy) = Tr(L_{z^2 x} L_y) for a normalisable algebra.
inline double normalisability_residual(const ComplexAlgebra& a) {
  if (!a.has_normaliser()) throw MissingNormaliser("normalisability_residual: no normaliser");
  const auto d = static_cast<Eigen::Index>(a.dim());
  const Matrix z2 = to_matrix(*a.normaliser()) * to_matrix(*a.normaliser());
  const ComplexTensor cap = a.frob_cap();
  double worst = 0.0;
  for (Eigen::Index x = 0; x < d; ++x) {
    Vector ex = Vector::Zero(d);
    ex(x) = 1.0;
    const Matrix lzx = left_matrix(a, z2 * ex);
    for (Eigen::Index y = 0; y < d; ++y) {
      Vector ey = Vector::Zero(d);
      ey(y) = 1.0;
      const Complex rhs = (lzx * left_matrix(a, ey)).trace();
      worst = std::max(worst, std::abs(cap(0, static_cast<std::size_t>(x * d + y)) - rhs));
    }
  }
  return worst;
}

}  // namespace cpstar
