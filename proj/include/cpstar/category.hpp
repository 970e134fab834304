#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cpstar/cstar.hpp"

// Morphisms between normalisable dagger Frobenius algebras over the complex
// model, the completely-positive test and the categorical operations.
namespace cpstar {

// A linear map between two algebras. Complete positivity is checked, not assumed.
struct CPStarMorphism {
  ComplexAlgebra dom;
  ComplexAlgebra cod;
  ComplexTensor map;

  CPStarMorphism(ComplexAlgebra d, ComplexAlgebra c, const ComplexTensor& m)
      : dom(std::move(d)), cod(std::move(c)), map(m) {
    if (m.rows() != cod.dim() || m.cols() != dom.dim()) {
      throw ShapeMismatch("morphism map is " + legs_to_string(m.row_legs()) + "<-" + legs_to_string(m.col_legs()) +
                          " but objects have dimensions " + std::to_string(cod.dim()) + "<-" +
                          std::to_string(dom.dim()));
    }
    map = reshape(m, {cod.dim()}, {dom.dim()});
  }

  Matrix matrix() const { return to_matrix(map); }
};

// g : dom -> X (x) cod, stored with row legs {X, cod} and column leg {dom}.
// It satisfies f(a* b) = sum_x g_x(a)* g_x(b).
struct KrausWitness {
  std::size_t ancilla_dim = 0;
  ComplexTensor g = ComplexTensor({1, 1}, {1});

  Matrix component(std::size_t x) const {
    const auto db = static_cast<Eigen::Index>(g.row_legs()[1]);
    const auto da = static_cast<Eigen::Index>(g.cols());
    Matrix out(db, da);
    for (Eigen::Index b = 0; b < db; ++b)
      for (Eigen::Index a = 0; a < da; ++a)
        out(b, a) = g(x * static_cast<std::size_t>(db) + static_cast<std::size_t>(b), static_cast<std::size_t>(a));
    return out;
  }
};

// Most negative direction of a block Choi matrix.
struct CpCertificate {
  std::size_t cod_block = 0;
  std::size_t dom_block = 0;
  double min_eigenvalue = 0.0;
  Vector eigenvector;
  double hermitian_residual = 0.0;
};

struct CpDecision {
  bool cp = false;
  std::vector<std::size_t> dom_blocks;
  std::vector<std::size_t> cod_blocks;
  double min_eigenvalue = 0.0;
  std::optional<KrausWitness> witness;
  std::optional<CpCertificate> certificate;
  double witness_residual = 0.0;
};

namespace detail {

inline Matrix kron_matrix(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline void require_normalisers(const CPStarMorphism& f, const char* what) {
  if (!f.dom.has_normaliser() || !f.cod.has_normaliser()) {
    throw MissingNormaliser(std::string(what) + ": both objects need a normaliser");
  }
}

inline Tolerance scaled_tolerance(Tolerance tol, double scale) {
  const double s = std::max(1.0, scale);
  return {tol.eq * s, tol.eig * s};
}

// Choi matrix of block (l <- k) of a map between block models:
// C[(i,p),(j,q)] = F[(l,p,q),(k,i,j)].
inline Matrix block_choi(const Matrix& fb, const StandardForm& a, const StandardForm& b, std::size_t l,
                         std::size_t k) {
  const auto nk = static_cast<Eigen::Index>(a.block_sizes[k]);
  const auto nl = static_cast<Eigen::Index>(b.block_sizes[l]);
  const auto ok = static_cast<Eigen::Index>(a.block_offsets()[k]);
  const auto ol = static_cast<Eigen::Index>(b.block_offsets()[l]);
  Matrix c(nk * nl, nk * nl);
  for (Eigen::Index i = 0; i < nk; ++i)
    for (Eigen::Index p = 0; p < nl; ++p)
      for (Eigen::Index j = 0; j < nk; ++j)
        for (Eigen::Index q = 0; q < nl; ++q) c(i * nl + p, j * nl + q) = fb(ol + p * nl + q, ok + i * nk + j);
  return c;
}

}  // namespace detail

// Map in block coordinates: iso_cod * f * iso_dom^-1.
inline Matrix block_matrix(const CPStarMorphism& f, const StandardForm& dom, const StandardForm& cod) {
  return cod.iso * f.matrix() * dom.iso_inverse;
}

// max over basis pairs of |f(a* b) - sum_x g_x(a)* g_x(b)|.
inline double kraus_residual(const CPStarMorphism& f, const KrausWitness& w) {
  const auto da = static_cast<Eigen::Index>(f.dom.dim());
  const Matrix sa = star_matrix(f.dom);
  const Matrix sb = star_matrix(f.cod);
  const Matrix fm = f.matrix();
  std::vector<Matrix> parts;
  for (std::size_t x = 0; x < w.ancilla_dim; ++x) parts.push_back(w.component(x));
  double worst = 0.0;
  for (Eigen::Index a1 = 0; a1 < da; ++a1) {
    // star of a basis vector is the matching column of S
    Matrix lhs = fm * left_matrix(f.dom, sa.col(a1));
    for (const Matrix& gx : parts) lhs -= left_matrix(f.cod, sb * gx.col(a1).conjugate()) * gx;
    worst = std::max(worst, max_abs(lhs));
  }
  return worst;
}

// Kraus witness assembled blockwise. For a block pair with Kraus operator K
// (n_l x n_k), g(b) = J b_k K^dagger in block l, where the J are partial
// isometries covering the rows of block k, ceil(n_k / n_l) of them.
inline KrausWitness witness_from_blocks(const Matrix& fb, const StandardForm& a, const StandardForm& b,
                                        double cutoff) {
  const auto da = static_cast<Eigen::Index>(a.iso.cols());
  const auto db = static_cast<Eigen::Index>(b.iso.cols());
  const auto offa = a.block_offsets();
  const auto offb = b.block_offsets();
  std::vector<Matrix> parts;
  for (std::size_t l = 0; l < b.block_sizes.size(); ++l) {
    for (std::size_t k = 0; k < a.block_sizes.size(); ++k) {
      const auto nk = static_cast<Eigen::Index>(a.block_sizes[k]);
      const auto nl = static_cast<Eigen::Index>(b.block_sizes[l]);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(detail::block_choi(fb, a, b, l, k)));
      const Eigen::Index chunks = (nk + nl - 1) / nl;
      for (Eigen::Index s = 0; s < eig.eigenvalues().size(); ++s) {
        const double lambda = eig.eigenvalues()(s);
        if (lambda <= cutoff) continue;
        Matrix kraus(nl, nk);
        for (Eigen::Index i = 0; i < nk; ++i)
          for (Eigen::Index p = 0; p < nl; ++p) kraus(p, i) = std::sqrt(lambda) * eig.eigenvectors()(i * nl + p, s);
        for (Eigen::Index c = 0; c < chunks; ++c) {
          Matrix gb = Matrix::Zero(db, da);
          for (Eigen::Index p = 0; p < nl; ++p) {
            const Eigen::Index i = c * nl + p;
            if (i >= nk) break;
            for (Eigen::Index q = 0; q < nl; ++q)
              for (Eigen::Index j = 0; j < nk; ++j)
                gb(static_cast<Eigen::Index>(offb[l]) + p * nl + q, static_cast<Eigen::Index>(offa[k]) + i * nk + j) =
                    std::conj(kraus(q, j));
          }
          parts.push_back(b.iso_inverse * gb * a.iso);
        }
      }
    }
  }
  KrausWitness w;
  w.ancilla_dim = std::max<std::size_t>(parts.size(), 1);
  w.g = ComplexTensor({w.ancilla_dim, static_cast<std::size_t>(db)}, {static_cast<std::size_t>(da)});
  for (std::size_t x = 0; x < parts.size(); ++x)
    for (Eigen::Index r = 0; r < db; ++r)
      for (Eigen::Index c = 0; c < da; ++c)
        w.g(x * static_cast<std::size_t>(db) + static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = parts[x](r, c);
  return w;
}

// Decision through the standard forms of both objects: f is CP iff every
// block Choi matrix of the transported map is positive semidefinite.
inline CpDecision check_cpstar(const CPStarMorphism& f, const StandardForm& dom_sf, const StandardForm& cod_sf,
                               Tolerance tol = {}, bool extract_witness = true) {
  const Matrix fb = block_matrix(f, dom_sf, cod_sf);
  const Tolerance t = detail::scaled_tolerance(tol, max_abs(fb));
  CpDecision out;
  out.dom_blocks = dom_sf.block_sizes;
  out.cod_blocks = cod_sf.block_sizes;
  out.cp = true;
  std::optional<CpCertificate> worst;
  double worst_hermitian = -1.0;
  for (std::size_t l = 0; l < cod_sf.block_sizes.size(); ++l) {
    for (std::size_t k = 0; k < dom_sf.block_sizes.size(); ++k) {
      const PsdReport r = psd_report(detail::block_choi(fb, dom_sf, cod_sf, l, k), t);
      const bool lowest = (l == 0 && k == 0) || r.min_eigenvalue < out.min_eigenvalue;
      if (lowest) out.min_eigenvalue = r.min_eigenvalue;
      if (r.psd) continue;
      out.cp = false;
      // Prefer the most negative eigenvalue; a block that only fails
      // hermiticity is kept when nothing is negative.
      const bool negative = r.min_eigenvalue < -t.eig;
      const bool better = !worst || (negative && (lowest || worst->min_eigenvalue >= -t.eig)) ||
                          (!negative && worst->min_eigenvalue >= -t.eig && r.hermitian_residual > worst_hermitian);
      if (better) {
        worst = CpCertificate{l, k, r.min_eigenvalue, r.min_eigenvector, r.hermitian_residual};
        worst_hermitian = r.hermitian_residual;
      }
    }
  }
  if (!out.cp) {
    out.certificate = worst;
    return out;
  }
  if (extract_witness) {
    out.witness = witness_from_blocks(fb, dom_sf, cod_sf, t.eig);
    out.witness_residual = kraus_residual(f, *out.witness);
  }
  return out;
}

inline CpDecision check_cpstar(const CPStarMorphism& f, Tolerance tol = {}, bool extract_witness = true,
                               std::uint64_t seed = 0) {
  detail::require_normalisers(f, "check_cpstar");
  return check_cpstar(f, standard_form(f.dom, tol.eq, seed), standard_form(f.cod, tol.eq, seed), tol,
                      extract_witness);
}

// Algebra with conjugated structure constants.
inline ComplexAlgebra conjugate_algebra(const ComplexAlgebra& a) {
  std::optional<ComplexTensor> z;
  if (a.has_normaliser()) z = conjugate(*a.normaliser());
  return ComplexAlgebra(conjugate(a.mult()), conjugate(a.unit()), std::move(z));
}

// Left multiplication by f, read as an element of cod (x) conj(dom):
// sum_a L_{f(e_a)} (x) conj(L_{e_a}). Positive semidefinite iff f is CP.
inline Matrix generalized_choi(const CPStarMorphism& f) {
  const auto da = static_cast<Eigen::Index>(f.dom.dim());
  const auto db = static_cast<Eigen::Index>(f.cod.dim());
  const Matrix fm = f.matrix();
  Matrix out = Matrix::Zero(da * db, da * db);
  for (Eigen::Index a = 0; a < da; ++a) {
    Vector e = Vector::Zero(da);
    e(a) = 1.0;
    out += detail::kron_matrix(left_matrix(f.cod, fm.col(a)), left_matrix(f.dom, e).conjugate());
  }
  return out;
}

struct ConvolutionCheck {
  bool holds = false;
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  Matrix kraus;  // h : dom -> cod
};

// Convolution form: f = mult_cod (h# (x) h) comult_dom with h# = star h star.
// h is read off the square root of f as an element of cod (x) conj(dom);
// the check is whether it rebuilds f.
inline ConvolutionCheck convolution_form_check(const CPStarMorphism& f, Tolerance tol = {}) {
  const auto da = static_cast<Eigen::Index>(f.dom.dim());
  const auto db = static_cast<Eigen::Index>(f.cod.dim());
  const Matrix fm = f.matrix();
  const Matrix choi = generalized_choi(f);
  ConvolutionCheck out;
  out.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Matrix>(hermitian_part(choi), Eigen::EigenvaluesOnly)
                           .eigenvalues()(0);
  const Vector unit = detail::kron_matrix(to_vector(f.cod.unit()), to_vector(f.dom.unit()).conjugate());
  const Vector k = psd_sqrt(choi) * unit;
  Matrix h(db, da);
  for (Eigen::Index b = 0; b < db; ++b)
    for (Eigen::Index a = 0; a < da; ++a) h(b, a) = k(b * da + a);
  const Matrix hs = star_matrix(f.cod) * h.conjugate() * star_matrix(f.dom).conjugate();
  const Matrix rebuilt = to_matrix(f.cod.mult()) * detail::kron_matrix(hs, h) * to_matrix(f.dom.comult());
  out.residual = max_abs(rebuilt - fm) + max_abs(choi - choi.adjoint());
  out.holds = out.residual <= std::sqrt(tol.eq) * 0.1 * std::max(1.0, max_abs(fm));
  out.kraus = h;
  return out;
}

inline CPStarMorphism identity_morphism(const ComplexAlgebra& a) { return {a, a, identity<ComplexModel>(a.dim())}; }

inline CPStarMorphism compose(const CPStarMorphism& g, const CPStarMorphism& f, double tol = Tolerance{}.eq) {
  if (!same_structure(f.cod, g.dom, tol)) {
    throw ObjectMismatch("compose: codomain of the first map is not the domain of the second");
  }
  return {f.dom, g.cod, contract(g.map, f.map)};
}

inline CPStarMorphism tensor(const CPStarMorphism& f, const CPStarMorphism& g) {
  const ComplexTensor k = kron(f.map, g.map);
  return {tensor_algebra(f.dom, g.dom), tensor_algebra(f.cod, g.cod),
          reshape(k, {f.cod.dim() * g.cod.dim()}, {f.dom.dim() * g.dom.dim()})};
}

inline CPStarMorphism dagger_morphism(const CPStarMorphism& f) { return {f.cod, f.dom, dagger(f.map)}; }

struct StarHomReport {
  double multiplicative_residual = 0.0;
  double star_residual = 0.0;
  bool holds = false;
};

inline StarHomReport star_homomorphism_report(const CPStarMorphism& f, double tol = Tolerance{}.eq) {
  detail::require_normalisers(f, "is_star_homomorphism");
  StarHomReport r;
  r.multiplicative_residual =
      max_deviation(contract(f.map, f.dom.mult()), contract(f.cod.mult(), kron(f.map, f.map)));
  const Matrix fm = f.matrix();
  r.star_residual = max_abs(star_matrix(f.cod) * fm.conjugate() - fm * star_matrix(f.dom));
  const double scale = std::max(1.0, max_abs(fm));
  r.holds = r.multiplicative_residual <= tol * scale * scale && r.star_residual <= tol * scale;
  return r;
}

inline bool is_star_homomorphism(const CPStarMorphism& f, double tol = Tolerance{}.eq) {
  return star_homomorphism_report(f, tol).holds;
}

inline bool is_positive_element(const CPStarMorphism& state, Tolerance tol = {}) {
  if (!same_structure(state.dom, trivial_algebra<ComplexModel>(), tol.eq)) {
    throw ObjectMismatch("is_positive_element: domain is not the trivial algebra");
  }
  return positive_in_algebra(state.cod, reshape(state.map, {state.cod.dim()}, {}), tol);
}

inline bool is_normalised(const CPStarMorphism& f, double tol = Tolerance{}.eq) {
  return max_deviation(contract(f.cod.counit(), f.map), f.dom.counit()) <= tol;
}

struct ClassicalChannelReport {
  bool classical = false;  // commutative objects and CP
  bool normalised = false;
  bool stochastic = false;
  std::optional<Matrix> matrix;  // f in copyable-point bases
  std::vector<ComplexTensor> dom_points;
  std::vector<ComplexTensor> cod_points;
};

// Column j holds the coefficients of f(p_j) in the points of cod.
inline Matrix matrix_in_points(const CPStarMorphism& f, const std::vector<ComplexTensor>& dom_points,
                               const std::vector<ComplexTensor>& cod_points) {
  const Matrix fm = f.matrix();
  Matrix out(static_cast<Eigen::Index>(cod_points.size()), static_cast<Eigen::Index>(dom_points.size()));
  for (std::size_t j = 0; j < dom_points.size(); ++j) {
    const Vector image = fm * to_vector(dom_points[j]);
    for (std::size_t i = 0; i < cod_points.size(); ++i) {
      const Vector p = to_vector(cod_points[i]);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.dot(image) / p.squaredNorm();
    }
  }
  return out;
}

inline ClassicalChannelReport is_classical_channel(const CPStarMorphism& f, Tolerance tol = {}) {
  ClassicalChannelReport out;
  if (!classify(f.dom, tol.eq).commutative.pass || !classify(f.cod, tol.eq).commutative.pass) return out;
  out.classical = check_cpstar(f, tol, false).cp;
  if (!out.classical) return out;
  out.normalised = is_normalised(f, std::sqrt(tol.eq));
  out.dom_points = copyable_points(f.dom, tol.eq).points;
  out.cod_points = copyable_points(f.cod, tol.eq).points;
  const Matrix m = matrix_in_points(f, out.dom_points, out.cod_points);
  out.matrix = m;
  if (!out.normalised) return out;
  const double slack = std::sqrt(tol.eq);
  bool ok = true;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      ok = ok && std::abs(m(i, j).imag()) <= slack && m(i, j).real() >= -slack;
      sum += m(i, j);
    }
    ok = ok && std::abs(sum - Complex(1.0)) <= slack;
  }
  out.stochastic = ok;
  return out;
}

// The map sending copyable point j of dom to sum_i m(i,j) times point i of
// cod, between the algebras whose copyable points are the given columns.
inline CPStarMorphism channel_from_stochastic(const Matrix& m, const Matrix& dom_basis, const Matrix& cod_basis) {
  if (m.rows() != cod_basis.cols() || m.cols() != dom_basis.cols()) {
    throw ShapeMismatch("channel_from_stochastic: matrix does not match the bases");
  }
  const ComplexAlgebra dom = from_orthogonal_basis(dom_basis);
  const ComplexAlgebra cod = from_orthogonal_basis(cod_basis);
  Matrix dual = dom_basis.adjoint();
  for (Eigen::Index j = 0; j < dual.rows(); ++j) dual.row(j) /= dom_basis.col(j).squaredNorm();
  return {dom, cod, square_from_matrix(cod_basis * m * dual)};
}

inline CPStarMorphism channel_from_stochastic(const Matrix& m) {
  return channel_from_stochastic(m, Matrix::Identity(m.cols(), m.cols()), Matrix::Identity(m.rows(), m.rows()));
}

// Side of a pair-of-pants algebra, or nothing.
inline std::optional<std::size_t> pants_side(const ComplexAlgebra& a, double tol = Tolerance{}.eq) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a.dim()))));
  if (n * n != a.dim() || !same_structure(a, pair_of_pants<ComplexModel>(n), tol)) return std::nullopt;
  return n;
}

// Choi matrix of a map between pants algebras, read off the entries directly:
// C[(i,p),(j,q)] = f[(p,q),(i,j)].
inline Matrix pants_choi(const CPStarMorphism& f, double tol = Tolerance{}.eq) {
  const auto m = pants_side(f.dom, tol);
  const auto n = pants_side(f.cod, tol);
  if (!m || !n) throw NotPantsForm("cpm_check: objects must be pair-of-pants algebras");
  const auto dm = static_cast<Eigen::Index>(*m);
  const auto dn = static_cast<Eigen::Index>(*n);
  const Matrix fm = f.matrix();
  Matrix c(dm * dn, dm * dn);
  for (Eigen::Index i = 0; i < dm; ++i)
    for (Eigen::Index p = 0; p < dn; ++p)
      for (Eigen::Index j = 0; j < dm; ++j)
        for (Eigen::Index q = 0; q < dn; ++q) c(i * dn + p, j * dn + q) = fm(p * dn + q, i * dm + j);
  return c;
}

inline bool cpm_check(const CPStarMorphism& f, Tolerance tol = {}) {
  const Matrix c = pants_choi(f, tol.eq);
  return psd_report(c, detail::scaled_tolerance(tol, max_abs(c))).psd;
}

// conj(u) (x) u between pants algebras.
inline CPStarMorphism pure_embed(const ComplexTensor& u) {
  const ComplexTensor m = reshape(u, {u.rows()}, {u.cols()});
  return {pair_of_pants<ComplexModel>(u.cols()), pair_of_pants<ComplexModel>(u.rows()),
          reshape(kron(conjugate(m), m), {u.rows() * u.rows()}, {u.cols() * u.cols()})};
}

inline CPStarMorphism pure_embed(const Matrix& u) { return pure_embed(square_from_matrix(u)); }

// B(A (x) B) -> B(A) (x) B(B): e_{(i,k),(j,l)} -> e_{ij} (x) e_{kl}.
inline CPStarMorphism reshuffle(std::size_t da, std::size_t db) {
  if (da == 0 || db == 0) throw ShapeMismatch("reshuffle: dimensions must be positive");
  const std::size_t n = da * db;
  ComplexTensor m({n * n}, {n * n});
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) {
          const std::size_t src = (i * db + k) * n + (j * db + l);
          const std::size_t dst = (i * da + j) * db * db + (k * db + l);
          m(dst, src) = 1.0;
        }
  return {pair_of_pants<ComplexModel>(n),
          tensor_algebra(pair_of_pants<ComplexModel>(da), pair_of_pants<ComplexModel>(db)), m};
}

inline CPStarMorphism transpose_map(std::size_t d) {
  ComplexTensor m({d * d}, {d * d});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(j * d + i, i * d + j) = 1.0;
  return {pair_of_pants<ComplexModel>(d), pair_of_pants<ComplexModel>(d), m};
}

inline CPStarMorphism trace_map(std::size_t d) {
  const ComplexAlgebra p = pair_of_pants<ComplexModel>(d);
  return {p, trivial_algebra<ComplexModel>(), p.counit()};
}

inline CPStarMorphism unital_embedding(std::size_t d) {
  const ComplexAlgebra p = pair_of_pants<ComplexModel>(d);
  return {trivial_algebra<ComplexModel>(), p, reshape(p.unit(), {d * d}, {1})};
}

// x -> Tr(x) id / d.
inline CPStarMorphism depolarizing(std::size_t d) {
  const ComplexAlgebra p = pair_of_pants<ComplexModel>(d);
  ComplexTensor m({d * d}, {d * d});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0 / static_cast<double>(d);
  return {p, p, m};
}

}  // namespace cpstar
