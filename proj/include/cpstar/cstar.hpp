#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cpstar/center.hpp"
#include "cpstar/normaliser.hpp"

namespace cpstar {

// Matrix S with star(x) = S * conj(x).
inline Matrix star_matrix(const ComplexAlgebra& a) {
  const auto d = static_cast<Eigen::Index>(a.dim());
  const ComplexTensor cup = a.frob_cup();
  Matrix s(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) s(j, i) = cup(static_cast<std::size_t>(i * d + j), 0);
  return s;
}

struct StandardForm {
  std::vector<std::size_t> block_sizes;
  Matrix iso;          // algebra -> block model
  Matrix iso_inverse;  // columns are the matrix units e_ij^(k)
  ComplexAlgebra block_model = trivial_algebra<ComplexModel>();
  std::vector<double> block_scales;  // 1 where the block is an orthonormal copy of a matrix algebra
  std::vector<Vector> central_idempotents;
  double homomorphism_residual = 0.0;
  double unit_residual = 0.0;
  double star_residual = 0.0;
  double unitarity_residual = 0.0;

  std::vector<std::size_t> block_offsets() const {
    std::vector<std::size_t> out;
    std::size_t off = 0;
    for (auto n : block_sizes) {
      out.push_back(off);
      off += n * n;
    }
    return out;
  }
  ComplexTensor iso_tensor() const { return square_from_matrix(iso); }
  // Block k of the image of x as an n_k x n_k matrix.
  Matrix block_image(const Vector& x, std::size_t k) const {
    const Vector y = iso * x;
    const auto n = static_cast<Eigen::Index>(block_sizes.at(k));
    const auto off = static_cast<Eigen::Index>(block_offsets()[k]);
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = y(off + i * n + j);
    return out;
  }
};

inline ComplexAlgebra matrix_blocks(const std::vector<std::size_t>& sizes) {
  std::vector<ComplexAlgebra> parts;
  for (auto n : sizes) parts.push_back(pair_of_pants<ComplexModel>(n));
  return direct_sum(parts);
}

namespace detail {

inline Vector real_gaussian_combination(const Matrix& basis, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector c(basis.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  return basis * c;
}

// Clusters of a Hermitian spectrum, or empty when two clusters sit too close
// to separate reliably.
inline std::vector<std::vector<Eigen::Index>> clean_clusters(const Eigen::VectorXd& values) {
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double gap = 1e-6 * scale;
  auto clusters = cluster_ascending(values, gap);
  for (std::size_t c = 1; c < clusters.size(); ++c) {
    if (values(clusters[c].front()) - values(clusters[c - 1].back()) < 1e-3 * scale) return {};
  }
  return clusters;
}

constexpr int kMaxAttempts = 25;

}  // namespace detail

// Artin-Wedderburn decomposition. Central idempotents come from the spectral
// split of L_h for a random Hermitian central h; matrix units from rank-one
// spectral projections of a random Hermitian element of each block.
inline StandardForm standard_form(const ComplexAlgebra& input, double tol = Tolerance{}.eq,
                                  std::uint64_t seed = 0) {
  const ComplexAlgebra a = input.has_normaliser() ? input : with_solved_normaliser(input, tol);
  const auto d = static_cast<Eigen::Index>(a.dim());
  Rng rng(seed);
  const Matrix s = star_matrix(a);
  auto star_vec = [&](const Vector& x) -> Vector { return s * x.conjugate(); };
  auto mul = [&](const Vector& x, const Vector& y) -> Vector { return left_matrix(a, x) * y; };
  const Vector unit = to_vector(a.unit());
  const ComplexTensor tau = loop_trace(a);
  auto loop_value = [&](const Vector& x) {
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) acc += tau(0, static_cast<std::size_t>(i)) * x(i);
    return acc.real();
  };

  const Matrix zbasis = center_matrix(a, tol);
  const auto m = zbasis.cols();

  struct Block {
    std::size_t n;
    Matrix range;  // orthonormal basis of the block subspace
    Vector idempotent;
    double loop;
    double eigenvalue;
  };
  std::vector<Block> blocks;
  for (int attempt = 0; attempt < detail::kMaxAttempts && blocks.empty(); ++attempt) {
    Vector h = detail::real_gaussian_combination(zbasis, rng);
    h = (h + star_vec(h)) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(left_matrix(a, h)));
    const auto clusters = detail::clean_clusters(eig.eigenvalues());
    if (static_cast<Eigen::Index>(clusters.size()) != m) continue;
    for (const auto& cl : clusters) {
      Matrix range(d, static_cast<Eigen::Index>(cl.size()));
      for (std::size_t c = 0; c < cl.size(); ++c) range.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(cl[c]);
      const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(cl.size()))));
      if (n * n != cl.size()) {
        throw StandardFormError("standard_form: block of dimension " + std::to_string(cl.size()) +
                                " is not a perfect square");
      }
      const Vector e = range * (range.adjoint() * unit);
      blocks.push_back({n, range, e, loop_value(e), eig.eigenvalues()(cl.front())});
    }
  }
  if (blocks.empty()) throw StandardFormError("standard_form: could not split the center spectrum");

  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) {
    if (x.n != y.n) return x.n > y.n;
    if (std::abs(x.loop - y.loop) > 1e-9 * std::max(1.0, std::abs(x.loop))) return x.loop < y.loop;
    return false;
  });

  StandardForm sf;
  Matrix phi(d, d);
  Eigen::Index col = 0;
  for (const Block& b : blocks) {
    const auto n = static_cast<Eigen::Index>(b.n);
    auto project = [&](const Vector& x) -> Vector { return b.range * (b.range.adjoint() * x); };
    std::vector<Vector> units(static_cast<std::size_t>(n * n));
    bool done = false;
    for (int attempt = 0; attempt < detail::kMaxAttempts && !done; ++attempt) {
      std::vector<Vector> q;
      if (n == 1) {
        q.push_back(b.idempotent);
      } else {
        Vector y = project(random_gaussian(d, 1, rng).col(0));
        y = (y + star_vec(y)) / 2.0;
        const Matrix restricted = b.range.adjoint() * left_matrix(a, y) * b.range;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(restricted));
        const auto clusters = detail::clean_clusters(eig.eigenvalues());
        if (static_cast<Eigen::Index>(clusters.size()) != n) continue;
        bool uniform = true;
        for (const auto& cl : clusters) uniform = uniform && static_cast<Eigen::Index>(cl.size()) == n;
        if (!uniform) continue;
        const Vector local_unit = b.range.adjoint() * b.idempotent;
        for (const auto& cl : clusters) {
          Matrix w(n * n, static_cast<Eigen::Index>(cl.size()));
          for (std::size_t c = 0; c < cl.size(); ++c) w.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(cl[c]);
          q.push_back(b.range * (w * (w.adjoint() * local_unit)));
        }
      }
      // e_i1 from q_i r q_1, normalised so that e_i1* e_i1 = q_1.
      std::vector<Vector> column_units(static_cast<std::size_t>(n));
      column_units[0] = q[0];
      bool ok = true;
      const Vector r = project(random_gaussian(d, 1, rng).col(0));
      for (Eigen::Index i = 1; i < n && ok; ++i) {
        const Vector t = mul(mul(q[static_cast<std::size_t>(i)], r), q[0]);
        const Vector tt = mul(star_vec(t), t);
        const Complex alpha = q[0].dot(tt) / q[0].squaredNorm();
        const double fit = (tt - alpha * q[0]).norm() / std::max(1e-300, tt.norm());
        if (alpha.real() <= std::sqrt(tol) || fit > 1e-6) {
          ok = false;
          break;
        }
        column_units[static_cast<std::size_t>(i)] = t / std::sqrt(alpha.real());
      }
      if (!ok) continue;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const Vector& ei1 = column_units[static_cast<std::size_t>(i)];
          const Vector e1j = star_vec(column_units[static_cast<std::size_t>(j)]);
          units[static_cast<std::size_t>(i * n + j)] = (i == 0 && j == 0) ? q[0] : mul(ei1, e1j);
        }
      done = true;
    }
    if (!done) throw StandardFormError("standard_form: could not build matrix units for a block of size " +
                                       std::to_string(b.n));
    for (const auto& u : units) phi.col(col++) = u;
    sf.block_sizes.push_back(b.n);
    sf.block_scales.push_back(1.0 / units[0].norm());
    sf.central_idempotents.push_back(b.idempotent);
  }

  Eigen::FullPivLU<Matrix> lu(phi);
  if (!lu.isInvertible()) throw StandardFormError("standard_form: matrix units are linearly dependent");
  sf.iso_inverse = phi;
  sf.iso = lu.inverse();
  sf.block_model = matrix_blocks(sf.block_sizes);

  const ComplexTensor iso_t = square_from_matrix(sf.iso);
  const ComplexTensor lhs = contract(iso_t, a.mult());
  const ComplexTensor rhs = compose_at_input(compose_at_input(sf.block_model.mult(), iso_t, 0), iso_t, 1);
  sf.homomorphism_residual = max_deviation(lhs, rhs);
  sf.unit_residual = max_abs(sf.iso * unit - to_vector(sf.block_model.unit()));
  sf.star_residual = max_abs(sf.iso * s - star_matrix(sf.block_model) * sf.iso.conjugate());
  sf.unitarity_residual = max_abs(sf.iso.adjoint() * sf.iso - Matrix::Identity(d, d));
  if (sf.homomorphism_residual > 1e-6 || sf.unit_residual > 1e-6 || sf.star_residual > 1e-6) {
    throw StandardFormError("standard_form: recovered map is not a *-isomorphism (residual " +
                            std::to_string(std::max({sf.homomorphism_residual, sf.unit_residual, sf.star_residual})) +
                            ")");
  }
  return sf;
}

inline double operator_norm(const StandardForm& sf, const Vector& x) {
  double best = 0.0;
  for (std::size_t k = 0; k < sf.block_sizes.size(); ++k) {
    Eigen::JacobiSVD<Matrix> svd(sf.block_image(x, k));
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

inline double operator_norm(const ComplexAlgebra& a, const ComplexTensor& x, double tol = Tolerance{}.eq) {
  require_element(a, x);
  return operator_norm(standard_form(a, tol), to_vector(x));
}

struct PositivityReport {
  bool positive = false;
  std::vector<double> block_min_eigenvalues;
  double hermitian_residual = 0.0;
};

inline PositivityReport positivity(const StandardForm& sf, const Vector& x, Tolerance tol = {}) {
  PositivityReport out;
  out.positive = true;
  for (std::size_t k = 0; k < sf.block_sizes.size(); ++k) {
    const PsdReport r = psd_report(sf.block_image(x, k), tol);
    out.block_min_eigenvalues.push_back(r.min_eigenvalue);
    out.hermitian_residual = std::max(out.hermitian_residual, r.hermitian_residual);
    out.positive = out.positive && r.psd;
  }
  return out;
}

inline bool positive_in_algebra(const ComplexAlgebra& a, const ComplexTensor& x, Tolerance tol = {}) {
  require_element(a, x);
  return positivity(standard_form(a, tol.eq), to_vector(x), tol).positive;
}

struct CopyablePointSet {
  std::vector<ComplexTensor> points;
  std::vector<double> norms;  // squared norms
};

// Minimal idempotents e, rescaled so that comult(p) = p (x) p.
inline CopyablePointSet copyable_points(const ComplexAlgebra& a, double tol = Tolerance{}.eq) {
  const AxiomReport r = classify(a, tol);
  if (!r.commutative.pass) throw NotCommutative("copyable_points: algebra is not commutative");
  const StandardForm sf = standard_form(a, tol);
  const ComplexTensor delta = a.comult();
  CopyablePointSet out;
  for (const Vector& e : sf.central_idempotents) {
    const ComplexTensor et = state_from_vector(e);
    const Vector de = to_vector(contract(delta, et));
    const Vector ee = to_vector(kron(et, et));
    const Complex beta = ee.dot(de) / ee.squaredNorm();
    const Vector p = beta * e;
    const ComplexTensor pt = state_from_vector(p);
    const double copy_residual = max_deviation(contract(delta, pt), kron(pt, pt));
    if (copy_residual > std::sqrt(tol)) {
      throw StandardFormError("copyable_points: rescaled idempotent is not copyable (residual " +
                              std::to_string(copy_residual) + ")");
    }
    out.points.push_back(pt);
    out.norms.push_back(p.squaredNorm());
  }
  // Order by leading coordinate so the standard basis comes back in order.
  auto lead = [](const ComplexTensor& t) {
    const Vector v = to_vector(t);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-9)) best = i;
    return best;
  };
  std::vector<std::size_t> order(out.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return lead(out.points[x]) < lead(out.points[y]); });
  CopyablePointSet sorted;
  for (auto i : order) {
    sorted.points.push_back(out.points[i]);
    sorted.norms.push_back(out.norms[i]);
  }
  return sorted;
}

}  // namespace cpstar
