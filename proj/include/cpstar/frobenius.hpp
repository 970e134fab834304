#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cpstar/errors.hpp"
#include "cpstar/linalg.hpp"
#include "cpstar/tensor.hpp"

namespace cpstar {

// Carrier of dimension d with multiplication d <- d.d and unit d <- 1.
// Comultiplication and counit are the daggers and are never stored.
template <ScalarModel M>
class FrobeniusAlgebra {
 public:
  using model_type = M;

  FrobeniusAlgebra(Tensor<M> mult, Tensor<M> unit, std::optional<Tensor<M>> normaliser = std::nullopt)
      : mult_(std::move(mult)), unit_(std::move(unit)), normaliser_(std::move(normaliser)) {
    if (mult_.row_legs().size() != 1) throw ShapeMismatch("multiplication must have a single output leg");
    const std::size_t d = mult_.row_legs()[0];
    if (mult_.col_legs() != Legs{d, d}) {
      throw ShapeMismatch("multiplication must be d <- d.d, got " + legs_to_string(mult_.row_legs()) + "<-" +
                          legs_to_string(mult_.col_legs()));
    }
    if (unit_.row_legs() != Legs{d} || !unit_.col_legs().empty()) throw ShapeMismatch("unit must be d <- 1");
    if (normaliser_ && (normaliser_->row_legs() != Legs{d} || normaliser_->col_legs() != Legs{d})) {
      throw ShapeMismatch("normaliser must be d <- d");
    }
  }

  std::size_t dim() const { return mult_.row_legs()[0]; }
  const Tensor<M>& mult() const { return mult_; }
  const Tensor<M>& unit() const { return unit_; }
  const std::optional<Tensor<M>>& normaliser() const { return normaliser_; }
  bool has_normaliser() const { return normaliser_.has_value(); }

  Tensor<M> comult() const { return dagger(mult_); }
  Tensor<M> counit() const { return dagger(unit_); }
  Tensor<M> frob_cup() const { return contract(comult(), unit_); }
  Tensor<M> frob_cap() const { return contract(counit(), mult_); }

  FrobeniusAlgebra with_normaliser(Tensor<M> z) const { return FrobeniusAlgebra(mult_, unit_, std::move(z)); }
  FrobeniusAlgebra without_normaliser() const { return FrobeniusAlgebra(mult_, unit_); }

 private:
  Tensor<M> mult_;
  Tensor<M> unit_;
  std::optional<Tensor<M>> normaliser_;
};

using ComplexAlgebra = FrobeniusAlgebra<ComplexModel>;
using BoolAlgebra = FrobeniusAlgebra<BooleanModel>;

struct Check {
  bool pass = false;
  double residual = 0.0;
};

struct AxiomReport {
  Check associative;
  Check unital;
  Check frobenius_law;
  Check frobenius_snake;
  Check symmetric;
  Check commutative;
  Check special;  // mult o comult = id
  Check normal;   // loop of mult equals the counit
  bool is_frobenius() const {
    return associative.pass && unital.pass && frobenius_law.pass && frobenius_snake.pass;
  }
};

template <ScalarModel M>
void require_element(const FrobeniusAlgebra<M>& a, const Tensor<M>& x) {
  if (x.row_legs() != Legs{a.dim()} || !x.col_legs().empty()) {
    throw ShapeMismatch("expected an element of dimension " + std::to_string(a.dim()));
  }
}

template <ScalarModel M>
void require_operator(const FrobeniusAlgebra<M>& a, const Tensor<M>& m) {
  if (m.row_legs() != Legs{a.dim()} || m.col_legs() != Legs{a.dim()}) {
    throw ShapeMismatch("expected an operator on dimension " + std::to_string(a.dim()));
  }
}

// L_x = mult o (x (x) id)
template <ScalarModel M>
Tensor<M> left_multiplication(const FrobeniusAlgebra<M>& a, const Tensor<M>& x) {
  require_element(a, x);
  return compose_at_input(a.mult(), x, 0);
}

// R_x = mult o (id (x) x)
template <ScalarModel M>
Tensor<M> right_multiplication(const FrobeniusAlgebra<M>& a, const Tensor<M>& x) {
  require_element(a, x);
  return compose_at_input(a.mult(), x, 1);
}

template <ScalarModel M>
Tensor<M> algebra_product(const FrobeniusAlgebra<M>& a, const Tensor<M>& x, const Tensor<M>& y) {
  require_element(a, x);
  require_element(a, y);
  return contract(a.mult(), kron(x, y));
}

// Covector x -> Tr(L_x): mult traced over its output and second input.
template <ScalarModel M>
Tensor<M> loop_trace(const FrobeniusAlgebra<M>& a) {
  return partial_trace(a.mult(), 0, 1);
}

// Covector x -> Tr(R_x).
template <ScalarModel M>
Tensor<M> right_loop_trace(const FrobeniusAlgebra<M>& a) {
  return partial_trace(a.mult(), 0, 0);
}

namespace detail {
template <ScalarModel M>
Check check(double residual, double tol) {
  return {passes<M>(residual, tol), residual};
}
}  // namespace detail

template <ScalarModel M>
AxiomReport verify_axioms(const FrobeniusAlgebra<M>& a, double tol = Tolerance{}.eq) {
  const std::size_t d = a.dim();
  const Tensor<M>& mu = a.mult();
  const Tensor<M> delta = a.comult();
  const Tensor<M> id = identity<M>(d);
  AxiomReport r;

  r.associative = detail::check<M>(max_deviation(compose_at_input(mu, mu, 0), compose_at_input(mu, mu, 1)), tol);

  r.unital = detail::check<M>(std::max(max_deviation(compose_at_input(mu, a.unit(), 0), id),
                                       max_deviation(compose_at_input(mu, a.unit(), 1), id)),
                              tol);

  const Tensor<M> middle = contract(delta, mu);
  const Tensor<M> left = compose_at_output(mu, kron(id, delta), 0);
  const Tensor<M> right = compose_at_output(mu, kron(delta, id), 1);
  r.frobenius_law = detail::check<M>(std::max(max_deviation(left, middle), max_deviation(right, middle)), tol);

  const Tensor<M> fcup = a.frob_cup();
  const Tensor<M> fcap = a.frob_cap();
  const Tensor<M> snake_left = compose_at_output(fcap, kron(id, fcup), 0);
  const Tensor<M> snake_right = compose_at_output(fcap, kron(fcup, id), 1);
  r.frobenius_snake =
      detail::check<M>(std::max(max_deviation(snake_left, id), max_deviation(snake_right, id)), tol);

  r.symmetric = detail::check<M>(max_deviation(fcap, regroup(fcap, {1, 0}, 0)), tol);
  r.commutative = detail::check<M>(max_deviation(mu, regroup(mu, {0, 2, 1}, 1)), tol);
  r.special = detail::check<M>(max_deviation(contract(mu, delta), id), tol);
  r.normal = detail::check<M>(max_deviation(loop_trace(a), a.counit()), tol);
  return r;
}

template <ScalarModel M>
AxiomReport classify(const FrobeniusAlgebra<M>& a, double tol = Tolerance{}.eq) {
  AxiomReport r = verify_axioms(a, tol);
  if (!r.is_frobenius()) throw NotAnAlgebra("classify: structure is not a Frobenius algebra");
  return r;
}

struct CoalgebraResiduals {
  double coassociative = 0.0;
  double counital = 0.0;
};

template <ScalarModel M>
CoalgebraResiduals coalgebra_residuals(const FrobeniusAlgebra<M>& a) {
  const Tensor<M> delta = a.comult();
  const Tensor<M> eps = a.counit();
  const Tensor<M> id = identity<M>(a.dim());
  CoalgebraResiduals r;
  r.coassociative = max_deviation(compose_at_output(delta, delta, 0), compose_at_output(delta, delta, 1));
  r.counital = std::max(max_deviation(compose_at_output(eps, delta, 0), id),
                        max_deviation(compose_at_output(eps, delta, 1), id));
  return r;
}

template <ScalarModel M>
bool is_central(const FrobeniusAlgebra<M>& a, const Tensor<M>& m, double tol = Tolerance{}.eq) {
  require_operator(a, m);
  const Tensor<M> after = contract(m, a.mult());
  return passes<M>(max_deviation(compose_at_input(a.mult(), m, 0), after), tol) &&
         passes<M>(max_deviation(compose_at_input(a.mult(), m, 1), after), tol);
}

// x* = (x^dagger (x) id) o comult o unit.
template <ScalarModel M>
Tensor<M> star(const FrobeniusAlgebra<M>& a, const Tensor<M>& x) {
  if (!a.has_normaliser()) throw MissingNormaliser("star: algebra carries no normaliser");
  require_element(a, x);
  return compose_at_output(dagger(x), a.frob_cup(), 0);
}

template <ScalarModel M>
typename M::value_type pants_normaliser_scale(std::size_t d) {
  if constexpr (is_complex_model<M>) {
    return Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0);
  } else if constexpr (std::same_as<M, NonnegRealModel>) {
    return 1.0 / std::sqrt(static_cast<double>(d));
  } else {
    // Joins make the loop of id_d equal to 1, so z = id.
    return M::one();
  }
}

// Matrix algebra on d*d with e_ij . e_kl = delta_jk e_il; index (i,j) -> i*d+j.
template <ScalarModel M>
FrobeniusAlgebra<M> pair_of_pants(std::size_t d) {
  const std::size_t n = d * d;
  Tensor<M> mult({n}, {n, n});
  Tensor<M> unit({n}, {});
  for (std::size_t i = 0; i < d; ++i) {
    unit(i * d + i, 0) = M::one();
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) mult(i * d + l, (i * d + j) * n + (j * d + l)) = M::one();
  }
  return FrobeniusAlgebra<M>(std::move(mult), std::move(unit), scaled(identity<M>(n), pants_normaliser_scale<M>(d)));
}

template <ScalarModel M>
FrobeniusAlgebra<M> trivial_algebra() {
  return pair_of_pants<M>(1);
}

template <ScalarModel M>
FrobeniusAlgebra<M> direct_sum(const FrobeniusAlgebra<M>& a, const FrobeniusAlgebra<M>& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  const std::size_t d = da + db;
  Tensor<M> mult({d}, {d, d});
  Tensor<M> unit({d}, {});
  for (std::size_t x = 0; x < da; ++x) {
    unit(x, 0) = a.unit()(x, 0);
    for (std::size_t y = 0; y < da; ++y)
      for (std::size_t z = 0; z < da; ++z) mult(x, y * d + z) = a.mult()(x, y * da + z);
  }
  for (std::size_t x = 0; x < db; ++x) {
    unit(da + x, 0) = b.unit()(x, 0);
    for (std::size_t y = 0; y < db; ++y)
      for (std::size_t z = 0; z < db; ++z) mult(da + x, (da + y) * d + (da + z)) = b.mult()(x, y * db + z);
  }
  std::optional<Tensor<M>> z;
  if (a.has_normaliser() && b.has_normaliser()) {
    Tensor<M> zz({d}, {d});
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) zz(i, j) = (*a.normaliser())(i, j);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j) zz(da + i, da + j) = (*b.normaliser())(i, j);
    z = std::move(zz);
  }
  return FrobeniusAlgebra<M>(std::move(mult), std::move(unit), std::move(z));
}

template <ScalarModel M>
FrobeniusAlgebra<M> direct_sum(const std::vector<FrobeniusAlgebra<M>>& parts) {
  if (parts.empty()) throw ShapeMismatch("direct_sum of no algebras");
  FrobeniusAlgebra<M> acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = direct_sum(acc, parts[i]);
  return acc;
}

// Carrier A (x) B with index (a,b) -> a*dB + b.
template <ScalarModel M>
FrobeniusAlgebra<M> tensor_algebra(const FrobeniusAlgebra<M>& a, const FrobeniusAlgebra<M>& b) {
  const std::size_t d = a.dim() * b.dim();
  // kron legs: outA outB | lhsA rhsA lhsB rhsB -> outA outB | lhsA lhsB rhsA rhsB
  const Tensor<M> k = regroup(kron(a.mult(), b.mult()), {0, 1, 2, 4, 3, 5}, 2);
  Tensor<M> mult = reshape(k, {d}, {d, d});
  Tensor<M> unit = reshape(kron(a.unit(), b.unit()), {d}, {});
  std::optional<Tensor<M>> z;
  if (a.has_normaliser() && b.has_normaliser()) z = reshape(kron(*a.normaliser(), *b.normaliser()), {d}, {d});
  return FrobeniusAlgebra<M>(std::move(mult), std::move(unit), std::move(z));
}

// Moving an element through the Frobenius cup from either side:
// (mult (x) id)(id (x) cup) against (id (x) mult)(cup (x) id).
template <ScalarModel M>
double actions_residual(const FrobeniusAlgebra<M>& a) {
  const Tensor<M> id = identity<M>(a.dim());
  const Tensor<M> cup = a.frob_cup();
  const Tensor<M> left = compose_at_output(a.mult(), kron(id, cup), 0);
  const Tensor<M> right = compose_at_output(a.mult(), kron(cup, id), 1);
  return max_deviation(left, right);
}

// True when both algebras have the same carrier, multiplication and unit.
template <ScalarModel M>
bool same_structure(const FrobeniusAlgebra<M>& a, const FrobeniusAlgebra<M>& b, double tol = Tolerance{}.eq) {
  return a.dim() == b.dim() && approx_equal(a.mult(), b.mult(), tol) && approx_equal(a.unit(), b.unit(), tol);
}

// Commutative algebra whose copyable points are the given vectors:
// comult(v) = v (x) v and mult = comult^dagger.
inline ComplexAlgebra from_orthogonal_basis(const std::vector<ComplexTensor>& vectors, double tol = Tolerance{}.eq) {
  const std::size_t d = vectors.size();
  if (d == 0) throw NotABasis("from_orthogonal_basis: no vectors");
  std::vector<Vector> v;
  for (const auto& t : vectors) {
    if (t.row_legs() != Legs{d} || !t.col_legs().empty()) {
      throw NotABasis("from_orthogonal_basis: need " + std::to_string(d) + " vectors of dimension " +
                      std::to_string(d));
    }
    v.push_back(to_vector(t));
    if (v.back().norm() <= tol) throw NotABasis("from_orthogonal_basis: zero vector");
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(v[i].dot(v[j])) > tol * v[i].norm() * v[j].norm()) {
        throw NotABasis("from_orthogonal_basis: vectors " + std::to_string(i) + " and " + std::to_string(j) +
                        " are not orthogonal");
      }

  ComplexTensor mult({d}, {d, d});
  ComplexTensor unit({d}, {});
  Matrix z = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const double r2 = v[i].squaredNorm();
    for (std::size_t x = 0; x < d; ++x) {
      const auto xi = static_cast<Eigen::Index>(x);
      unit(x, 0) += v[i](xi) / r2;
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
          mult(x, p * d + q) += v[i](xi) * std::conj(v[i](static_cast<Eigen::Index>(p))) *
                                std::conj(v[i](static_cast<Eigen::Index>(q))) / r2;
        }
    }
    z += (v[i] * v[i].adjoint()) / (r2 * std::sqrt(r2));
  }
  return ComplexAlgebra(std::move(mult), std::move(unit), square_from_matrix(z));
}

inline ComplexAlgebra from_orthogonal_basis(const Matrix& columns, double tol = Tolerance{}.eq) {
  std::vector<ComplexTensor> vs;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) vs.push_back(state_from_vector(columns.col(j)));
  return from_orthogonal_basis(vs, tol);
}

// Transport the structure along a unitary u: mult' = u mult (u^dag (x) u^dag).
inline ComplexAlgebra conjugate_by(const ComplexAlgebra& a, const Matrix& u) {
  const std::size_t d = a.dim();
  if (static_cast<std::size_t>(u.rows()) != d || u.rows() != u.cols()) {
    throw ShapeMismatch("conjugate_by: unitary has the wrong size");
  }
  const ComplexTensor ut = square_from_matrix(u);
  const ComplexTensor ud = dagger(ut);
  ComplexTensor mult = contract(contract(ut, a.mult()), kron(ud, ud));
  mult = reshape(mult, {d}, {d, d});
  ComplexTensor unit = contract(ut, a.unit());
  std::optional<ComplexTensor> z;
  if (a.has_normaliser()) z = contract(contract(ut, *a.normaliser()), ud);
  return ComplexAlgebra(std::move(mult), std::move(unit), std::move(z));
}

}  // namespace cpstar
