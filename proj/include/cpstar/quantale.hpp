#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cpstar/category.hpp"
#include "cpstar/groupoid.hpp"

// Matrices over quantales, the collapse to relations, and really completely
// positive maps between matrix algebras.
namespace cpstar {

// (S o R)(a, c) = join over b of R(a, b) . S(b, c)
template <QuantaleModel Q>
Tensor<Q> qmat_compose(const Tensor<Q>& s, const Tensor<Q>& r) {
  return contract(s, r);
}

template <QuantaleModel Q>
Tensor<Q> qmat_dagger(const Tensor<Q>& m) {
  return dagger(m);
}

template <QuantaleModel Q>
Tensor<Q> qmat_kron(const Tensor<Q>& a, const Tensor<Q>& b) {
  return kron(a, b);
}

// Entrywise: zero stays zero, everything else becomes 1.
template <ScalarModel Q>
BoolTensor collapse(const Tensor<Q>& m) {
  BoolTensor out(m.row_legs(), m.col_legs());
  auto src = m.entries();
  auto dst = out.entries();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == Q::zero() ? 0 : 1;
  return out;
}

template <QuantaleModel Q>
BoolAlgebra collapse(const FrobeniusAlgebra<Q>& a) {
  std::optional<BoolTensor> z;
  if (a.normaliser()) z = collapse(*a.normaliser());
  return BoolAlgebra(collapse(a.mult()), collapse(a.unit()), z);
}

template <QuantaleModel Q>
struct CollapseCounterexample {
  Tensor<Q> s;
  Tensor<Q> r;
  BoolTensor collapsed_composite;  // collapse(s o r)
  BoolTensor composite_of_collapses;  // collapse(s) o collapse(r)
};

// Exhaustive search for collapse(S o R) != collapse(S) o collapse(R) over
// matrices with entries from the grid and every dimension at most max_dim.
template <QuantaleModel Q>
std::optional<CollapseCounterexample<Q>> find_collapse_counterexample(const std::vector<typename Q::value_type>& grid,
                                                                     std::size_t max_dim) {
  if (max_dim > 2) throw SizeBoundExceeded("find_collapse_counterexample: max_dim must be at most 2");
  auto all = [&](std::size_t rows, std::size_t cols) {
    std::vector<Tensor<Q>> out;
    const std::size_t cells = rows * cols;
    std::size_t total = 1;
    for (std::size_t i = 0; i < cells; ++i) total *= grid.size();
    for (std::size_t code = 0; code < total; ++code) {
      Tensor<Q> t({rows}, {cols});
      std::size_t c = code;
      for (auto& v : t.entries()) {
        v = grid[c % grid.size()];
        c /= grid.size();
      }
      out.push_back(std::move(t));
    }
    return out;
  };
  for (std::size_t a = 1; a <= max_dim; ++a)
    for (std::size_t b = 1; b <= max_dim; ++b)
      for (std::size_t c = 1; c <= max_dim; ++c)
        for (const auto& r : all(b, a))
          for (const auto& s : all(c, b)) {
            BoolTensor lhs = collapse(qmat_compose(s, r));
            BoolTensor rhs = contract(collapse(s), collapse(r));
            if (!(lhs == rhs)) return CollapseCounterexample<Q>{s, r, std::move(lhs), std::move(rhs)};
          }
  return std::nullopt;
}

namespace detail {

template <ScalarModel M>
bool central_exact(const FrobeniusAlgebra<M>& a, const Tensor<M>& z) {
  const Tensor<M> after = contract(z, a.mult());
  return compose_at_input(a.mult(), z, 0) == after && compose_at_input(a.mult(), z, 1) == after;
}

// In Rel, h^dagger h is exactly a symmetric relation that is reflexive on its support.
inline bool rel_positive(const BoolTensor& z) {
  for (std::size_t x = 0; x < z.rows(); ++x)
    for (std::size_t y = 0; y < z.cols(); ++y)
      if (z(x, y) && (!z(y, x) || !z(x, x))) return false;
  return true;
}

}  // namespace detail

// Central, and (loop trace) o z o z = counit, checked exactly.
template <ScalarModel M>
bool satisfies_normaliser_equation(const FrobeniusAlgebra<M>& a, const Tensor<M>& z) {
  require_operator(a, z);
  return detail::central_exact(a, z) && contract(loop_trace(a), contract(z, z)) == a.counit();
}

// Collapses a normalisable dagger Frobenius algebra over Q to Rel and reads
// off its groupoid.
template <QuantaleModel Q>
Groupoid q_algebra_groupoid(const FrobeniusAlgebra<Q>& a) {
  if (!a.has_normaliser()) throw MissingNormaliser("q_algebra_groupoid: algebra carries no normaliser");
  const AxiomReport r = verify_axioms(a, 0.0);
  if (!r.associative.pass) throw NotAGroupoidAlgebra("associativity", "fails over the quantale");
  if (!r.unital.pass) throw NotAGroupoidAlgebra("unitality", "fails over the quantale");
  if (!r.frobenius_law.pass || !r.frobenius_snake.pass) {
    throw NotAGroupoidAlgebra("frobenius law", "fails over the quantale");
  }
  if (!satisfies_normaliser_equation(a, *a.normaliser())) {
    throw NotAGroupoidAlgebra("normaliser", "given normaliser fails its equation over the quantale");
  }
  const BoolAlgebra b = collapse(a);
  if (!verify_axioms(b, 0.0).is_frobenius()) throw NotAGroupoidAlgebra("frobenius law", "fails after collapse");
  const BoolTensor& z = *b.normaliser();
  if (!detail::rel_positive(z) || !satisfies_normaliser_equation(b, z)) {
    throw NotAGroupoidAlgebra("normaliser", "collapsed normaliser fails in Rel");
  }
  return algebra_to_groupoid(b);
}

template <QuantaleModel Q>
struct QAlgebraCandidate {
  FrobeniusAlgebra<Q> algebra;  // carries the normaliser found
};

// Every dagger Frobenius algebra on n points with mult, unit and normaliser
// entries drawn from the grid, where the normaliser is central, of the form
// h^dagger h with h over the grid, and satisfies the normaliser equation.
template <QuantaleModel Q>
std::vector<FrobeniusAlgebra<Q>> enumerate_q_algebras(std::size_t n, const std::vector<typename Q::value_type>& grid) {
  if (n > 2) throw SizeBoundExceeded("enumerate_q_algebras: carrier size must be at most 2");
  std::vector<FrobeniusAlgebra<Q>> out;
  const std::size_t g = grid.size();
  auto fill = [&](Tensor<Q>& t, std::size_t code) {
    for (auto& v : t.entries()) {
      v = grid[code % g];
      code /= g;
    }
  };
  auto power = [&](std::size_t e) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < e; ++i) p *= g;
    return p;
  };
  std::vector<Tensor<Q>> squares;
  for (std::size_t code = 0; code < power(n * n); ++code) {
    Tensor<Q> t({n}, {n});
    fill(t, code);
    squares.push_back(std::move(t));
  }
  std::vector<Tensor<Q>> positives;
  for (const auto& h : squares) {
    const Tensor<Q> p = contract(dagger(h), h);
    if (std::find(positives.begin(), positives.end(), p) == positives.end()) positives.push_back(p);
  }
  for (std::size_t ucode = 0; ucode < power(n); ++ucode) {
    Tensor<Q> unit({n}, {});
    fill(unit, ucode);
    for (std::size_t mcode = 0; mcode < power(n * n * n); ++mcode) {
      Tensor<Q> mult({n}, {n, n});
      fill(mult, mcode);
      const FrobeniusAlgebra<Q> a(mult, unit);
      if (!verify_axioms(a, 0.0).is_frobenius()) continue;
      for (const auto& z : positives) {
        if (satisfies_normaliser_equation(a, z)) {
          out.push_back(a.with_normaliser(z));
          break;
        }
      }
    }
  }
  return out;
}

struct RCPReport {
  bool really_positive = false;
  bool completely_positive = false;
  bool really_cp = false;
  double min_entry = 0.0;          // smallest real part among the entries
  double max_imaginary = 0.0;
};

namespace detail {

// Matrix-unit bases: every structure constant is 0 or 1.
inline void require_standard_basis(const ComplexAlgebra& a, double tol, const char* what) {
  auto check = [&](const ComplexTensor& t) {
    for (const Complex v : t.entries()) {
      if (std::abs(v) > tol && std::abs(v - Complex(1.0, 0.0)) > tol) {
        throw NotStandardBasis(std::string(what) + ": algebra is not presented in a matrix-unit basis");
      }
    }
  };
  check(a.mult());
  check(a.unit());
}

}  // namespace detail

// Entries of f in the matrix-unit bases must be nonnegative reals, and f must be CP.
inline RCPReport really_cp_check(const CPStarMorphism& f, Tolerance tol = {}) {
  detail::require_standard_basis(f.dom, tol.eq, "really_cp_check");
  detail::require_standard_basis(f.cod, tol.eq, "really_cp_check");
  RCPReport r;
  r.min_entry = std::numeric_limits<double>::infinity();
  for (const Complex v : f.map.entries()) {
    r.min_entry = std::min(r.min_entry, v.real());
    r.max_imaginary = std::max(r.max_imaginary, std::abs(v.imag()));
  }
  const double scale = std::max(1.0, max_abs(to_matrix(f.map)));
  r.really_positive = r.max_imaginary <= tol.eq * scale && r.min_entry >= -tol.eq * scale;
  r.completely_positive = check_cpstar(f, tol, false).cp;
  r.really_cp = r.really_positive && r.completely_positive;
  return r;
}

// Structure maps of a matrix algebra as morphisms.
inline CPStarMorphism multiplication_morphism(const ComplexAlgebra& a) {
  return {tensor_algebra(a, a), a, reshape(a.mult(), {a.dim()}, {a.dim() * a.dim()})};
}

inline CPStarMorphism unit_morphism(const ComplexAlgebra& a) {
  return {trivial_algebra<ComplexModel>(), a, reshape(a.unit(), {a.dim()}, {1})};
}

inline CPStarMorphism normaliser_morphism(const ComplexAlgebra& a) {
  if (!a.has_normaliser()) throw MissingNormaliser("normaliser_morphism: algebra carries no normaliser");
  return {a, a, *a.normaliser()};
}

}  // namespace cpstar
