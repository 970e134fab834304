#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string_view>

namespace cpstar {

using Complex = std::complex<double>;

// A scalar model supplies the semiring operations used by every contraction.
// Exact models compare with ==; the others compare up to a tolerance.
template <class M>
concept ScalarModel = requires(typename M::value_type a, typename M::value_type b) {
  { M::name } -> std::convertible_to<std::string_view>;
  { M::exact } -> std::convertible_to<bool>;
  { M::zero() } -> std::same_as<typename M::value_type>;
  { M::one() } -> std::same_as<typename M::value_type>;
  { M::add(a, b) } -> std::same_as<typename M::value_type>;
  { M::mul(a, b) } -> std::same_as<typename M::value_type>;
  { M::conj(a) } -> std::same_as<typename M::value_type>;
  { M::distance(a, b) } -> std::convertible_to<double>;
};

// Models with additive inverses (needed for differences and residual tensors).
template <class M>
concept LinearModel = ScalarModel<M> && requires(typename M::value_type a) {
  { M::neg(a) } -> std::same_as<typename M::value_type>;
};

template <class Q>
concept QuantaleModel = ScalarModel<Q> && requires(typename Q::value_type a, typename Q::value_type b) {
  { Q::join(a, b) } -> std::same_as<typename Q::value_type>;
  { Q::cancellative } -> std::convertible_to<bool>;
};

struct ComplexModel {
  using value_type = Complex;
  static constexpr std::string_view name = "complex";
  static constexpr bool exact = false;
  static value_type zero() { return {0.0, 0.0}; }
  static value_type one() { return {1.0, 0.0}; }
  static value_type add(value_type a, value_type b) { return a + b; }
  static value_type mul(value_type a, value_type b) { return a * b; }
  static value_type neg(value_type a) { return -a; }
  static value_type conj(value_type a) { return std::conj(a); }
  static double distance(value_type a, value_type b) { return std::abs(a - b); }
};

// Stored as uint8_t so tensors stay contiguous (no vector<bool>).
struct BooleanModel {
  using value_type = std::uint8_t;
  static constexpr std::string_view name = "boolean";
  static constexpr bool exact = true;
  static constexpr bool cancellative = true;
  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static value_type add(value_type a, value_type b) { return static_cast<value_type>((a | b) & 1U); }
  static value_type join(value_type a, value_type b) { return add(a, b); }
  static value_type mul(value_type a, value_type b) { return static_cast<value_type>((a & b) & 1U); }
  static value_type conj(value_type a) { return a; }
  static double distance(value_type a, value_type b) { return a == b ? 0.0 : 1.0; }
};

struct NonnegRealModel {
  using value_type = double;
  static constexpr std::string_view name = "nonneg-real";
  static constexpr bool exact = false;
  static value_type zero() { return 0.0; }
  static value_type one() { return 1.0; }
  static value_type add(value_type a, value_type b) { return a + b; }
  static value_type mul(value_type a, value_type b) { return a * b; }
  static value_type conj(value_type a) { return a; }
  static double distance(value_type a, value_type b) { return std::abs(a - b); }
};

namespace detail {
inline double exact_distance(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return std::numeric_limits<double>::infinity();
  return std::abs(a - b);
}
}  // namespace detail

// [0,1] with max as join and ordinary multiplication.
struct UnitIntervalQuantale {
  using value_type = double;
  static constexpr std::string_view name = "quantale:unit-interval";
  static constexpr bool exact = true;
  static constexpr bool cancellative = true;
  static value_type zero() { return 0.0; }
  static value_type one() { return 1.0; }
  static value_type add(value_type a, value_type b) { return std::max(a, b); }
  static value_type join(value_type a, value_type b) { return add(a, b); }
  static value_type mul(value_type a, value_type b) { return a * b; }
  static value_type conj(value_type a) { return a; }
  static double distance(value_type a, value_type b) { return detail::exact_distance(a, b); }
};

// [0,inf] with max as join; 0 absorbs infinity.
struct ExtendedRealQuantale {
  using value_type = double;
  static constexpr std::string_view name = "quantale:extended-reals";
  static constexpr bool exact = true;
  static constexpr bool cancellative = true;
  static value_type zero() { return 0.0; }
  static value_type one() { return 1.0; }
  static value_type add(value_type a, value_type b) { return std::max(a, b); }
  static value_type join(value_type a, value_type b) { return add(a, b); }
  static value_type mul(value_type a, value_type b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
  }
  static value_type conj(value_type a) { return a; }
  static double distance(value_type a, value_type b) { return detail::exact_distance(a, b); }
};

// Three-element Lukasiewicz chain {0, 1/2, 1}: x*y = max(0, x+y-1).
// Has zero divisors (1/2 * 1/2 = 0), so it is not cancellative.
struct LukasiewiczQuantale {
  using value_type = double;
  static constexpr std::string_view name = "quantale:lukasiewicz3";
  static constexpr bool exact = true;
  static constexpr bool cancellative = false;
  static value_type zero() { return 0.0; }
  static value_type one() { return 1.0; }
  static value_type add(value_type a, value_type b) { return std::max(a, b); }
  static value_type join(value_type a, value_type b) { return add(a, b); }
  static value_type mul(value_type a, value_type b) { return std::max(0.0, a + b - 1.0); }
  static value_type conj(value_type a) { return a; }
  static double distance(value_type a, value_type b) { return detail::exact_distance(a, b); }
};

template <ScalarModel M>
bool approx_equal(typename M::value_type a, typename M::value_type b, double tol) {
  const double dist = M::distance(a, b);
  return M::exact ? dist == 0.0 : dist <= tol;
}

template <ScalarModel M>
constexpr bool is_complex_model = std::same_as<M, ComplexModel>;

// Equality tolerance for tensors and the eigenvalue threshold for PSD tests.
struct Tolerance {
  double eq = 1e-9;
  double eig = 1e-7;
};

}  // namespace cpstar
