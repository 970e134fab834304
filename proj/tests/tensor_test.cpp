#include <gtest/gtest.h>

#include <random>

#include "cpstar/linalg.hpp"
#include "cpstar/tensor.hpp"

using namespace cpstar;

namespace {

ComplexTensor random_square(std::size_t n, Rng& rng) { return square_from_matrix(random_gaussian(n, n, rng)); }

// Plain triple loop, independent of the Eigen path used by contract.
Complex naive_entry(const ComplexTensor& a, const ComplexTensor& b, std::size_t i, std::size_t j) {
  Complex acc = 0.0;
  for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
  return acc;
}

template <class M>
void expect_snakes(std::size_t d) {
  const auto id = identity<M>(d);
  const auto left = compose_at_output(cap<M>(d), kron(id, cup<M>(d)), 0);
  const auto right = compose_at_output(cap<M>(d), kron(cup<M>(d), id), 1);
  EXPECT_TRUE(approx_equal(left, id, 1e-10)) << M::name << " d=" << d;
  EXPECT_TRUE(approx_equal(right, id, 1e-10)) << M::name << " d=" << d;
}

template <class A, class B>
constexpr bool can_contract = requires(A a, B b) { contract(a, b); };
template <class A, class B>
constexpr bool can_kron = requires(A a, B b) { kron(a, b); };

}  // namespace

TEST(ScalarModel, ComplexFieldLaws) {
  Rng rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Complex x(n(rng), n(rng)), y(n(rng), n(rng)), z(n(rng), n(rng));
    using M = ComplexModel;
    EXPECT_LT(M::distance(M::add(x, y), M::add(y, x)), 1e-12);
    EXPECT_LT(M::distance(M::mul(x, M::mul(y, z)), M::mul(M::mul(x, y), z)), 1e-12);
    EXPECT_LT(M::distance(M::mul(x, M::add(y, z)), M::add(M::mul(x, y), M::mul(x, z))), 1e-12);
    EXPECT_EQ(M::conj(M::conj(x)), x);
  }
}

template <class Q>
void expect_exact_semiring(const std::vector<double>& grid) {
  for (double x : grid)
    for (double y : grid)
      for (double z : grid) {
        EXPECT_EQ(Q::add(x, y), Q::add(y, x));
        EXPECT_EQ(Q::mul(x, y), Q::mul(y, x));
        EXPECT_EQ(Q::add(x, Q::add(y, z)), Q::add(Q::add(x, y), z));
        EXPECT_EQ(Q::mul(x, Q::mul(y, z)), Q::mul(Q::mul(x, y), z));
        EXPECT_EQ(Q::mul(x, Q::add(y, z)), Q::add(Q::mul(x, y), Q::mul(x, z)));
        EXPECT_EQ(Q::conj(Q::conj(x)), x);
      }
}

TEST(ScalarModel, QuantaleLawsOnGrids) {
  expect_exact_semiring<UnitIntervalQuantale>({0.0, 0.25, 0.5, 1.0});
  expect_exact_semiring<ExtendedRealQuantale>({0.0, 0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()});
  expect_exact_semiring<LukasiewiczQuantale>({0.0, 0.5, 1.0});
  EXPECT_EQ(ExtendedRealQuantale::mul(0.0, std::numeric_limits<double>::infinity()), 0.0);
}

TEST(ScalarModel, BooleanIsASemiring) {
  using B = BooleanModel;
  for (std::uint8_t x = 0; x < 2; ++x)
    for (std::uint8_t y = 0; y < 2; ++y)
      for (std::uint8_t z = 0; z < 2; ++z) {
        EXPECT_EQ(B::mul(x, B::add(y, z)), B::add(B::mul(x, y), B::mul(x, z)));
        EXPECT_EQ(B::add(x, y), B::add(y, x));
      }
}

TEST(ScalarModel, CancellativityFlags) {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  auto cancellative_on = [&](auto model) {
    using Q = decltype(model);
    for (double x : grid)
      for (double y : grid)
        for (double z : grid)
          if (Q::mul(x, y) == Q::mul(x, z) && y != z && x != 0.0) return false;
    return true;
  };
  EXPECT_TRUE(cancellative_on(UnitIntervalQuantale{}));
  EXPECT_FALSE(cancellative_on(LukasiewiczQuantale{}));
  EXPECT_FALSE(LukasiewiczQuantale::cancellative);
}

TEST(Tensor, ConstructionChecksEntryCount) {
  EXPECT_THROW(ComplexTensor({2}, {2}, std::vector<Complex>(3)), ShapeMismatch);
  const ComplexTensor t({2, 3}, {4});
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.rows(), 6u);
}

TEST(Tensor, ScalarModelsCannotBeMixed) {
  static_assert(can_contract<ComplexTensor, ComplexTensor>);
  static_assert(!can_contract<ComplexTensor, BoolTensor>);
  static_assert(!can_kron<ComplexTensor, BoolTensor>);
}

TEST(Contract, IdentityAndSwap) {
  EXPECT_EQ(contract(identity<ComplexModel>(3), identity<ComplexModel>(3)), identity<ComplexModel>(3));
  const auto s = swap<BooleanModel>(2, 2);
  EXPECT_EQ(contract(s, s), identity<BooleanModel>(Legs{2, 2}));
}

TEST(Contract, MatchesDirectSummation) {
  Rng rng(7);
  const auto a = random_square(3, rng);
  const auto b = random_square(3, rng);
  const auto c = contract(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LT(std::abs(c(i, j) - naive_entry(a, b, i, j)), 1e-12);
}

TEST(Contract, RejectsMismatchedLegs) {
  EXPECT_THROW(contract(identity<ComplexModel>(2), identity<ComplexModel>(3)), ShapeMismatch);
  EXPECT_THROW(contract(identity<ComplexModel>(Legs{2, 2}), identity<ComplexModel>(4)), ShapeMismatch);
}

TEST(Kron, IdentitiesAndBasis) {
  EXPECT_EQ(reshape(kron(identity<ComplexModel>(2), identity<ComplexModel>(3)), {6}, {6}), identity<ComplexModel>(6));
  ComplexTensor e11({2}, {2});
  e11(0, 0) = 1.0;
  const auto k = kron(e11, e11);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(k(r, c), (r == 0 && c == 0) ? Complex(1.0) : Complex(0.0));
}

TEST(Kron, Bifunctorial) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_square(2, rng), b = random_square(2, rng), c = random_square(2, rng),
               d = random_square(2, rng);
    EXPECT_LE(max_deviation(contract(kron(a, b), kron(c, d)), kron(contract(a, c), contract(b, d))), 1e-12);
  }
}

TEST(Kron, AssociativeUpToReshape) {
  Rng rng(4);
  const auto a = square_from_matrix(random_gaussian(2, 3, rng).leftCols(2));
  const ComplexTensor b = from_matrix(random_gaussian(3, 2, rng), {3}, {2});
  const ComplexTensor c = from_matrix(random_gaussian(2, 2, rng), {2}, {2});
  const auto left = kron(kron(a, b), c);
  const auto right = kron(a, kron(b, c));
  EXPECT_EQ(left.shape(), right.shape());
  EXPECT_LE(max_deviation(left, right), 1e-12);
}

TEST(Dagger, ExamplesAndInvolution) {
  ComplexTensor diag({2}, {2});
  diag(0, 0) = 2.0;
  diag(1, 1) = -1.5;
  EXPECT_EQ(dagger(diag), diag);

  ComplexTensor n({2}, {2});
  n(0, 1) = Complex(0.0, 1.0);
  const auto nd = dagger(n);
  EXPECT_EQ(nd(1, 0), Complex(0.0, -1.0));
  EXPECT_EQ(nd(0, 1), Complex(0.0));

  BoolTensor r({3}, {2});  // relation from a 2-set to a 3-set
  r(2, 0) = 1;
  r(1, 1) = 1;
  const auto rc = dagger(r);
  EXPECT_EQ(rc.row_legs(), Legs{2});
  EXPECT_EQ(rc(0, 2), 1);
  EXPECT_EQ(rc(1, 1), 1);
  EXPECT_EQ(rc(0, 1), 0);

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_square(3, rng), b = random_square(3, rng);
    EXPECT_EQ(dagger(dagger(a)), a);
    EXPECT_LE(max_deviation(dagger(contract(a, b)), contract(dagger(b), dagger(a))), 1e-12);
  }
}

TEST(CupCap, SmallCases) {
  EXPECT_EQ(cup<ComplexModel>(1).entries()[0], Complex(1.0));
  const auto c2 = cup<ComplexModel>(2);
  const std::vector<Complex> expected{1.0, 0.0, 0.0, 1.0};
  EXPECT_TRUE(std::equal(c2.entries().begin(), c2.entries().end(), expected.begin()));
  for (std::size_t d = 1; d <= 6; ++d) {
    EXPECT_EQ(contract(cap<ComplexModel>(d), cup<ComplexModel>(d)).entries()[0], Complex(static_cast<double>(d)));
    EXPECT_EQ(dagger(cup<ComplexModel>(d)), cap<ComplexModel>(d));
  }
}

TEST(CupCap, SnakeIdentities) {
  for (std::size_t d = 1; d <= 6; ++d) {
    expect_snakes<ComplexModel>(d);
    expect_snakes<BooleanModel>(d);
    expect_snakes<UnitIntervalQuantale>(d);
    expect_snakes<ExtendedRealQuantale>(d);
  }
}

TEST(PartialTrace, Examples) {
  EXPECT_EQ(trace(identity<ComplexModel>(3)), Complex(3.0));
  Rng rng(9);
  const auto a = random_square(3, rng);
  const auto k = kron(a, identity<ComplexModel>(2));
  EXPECT_LE(max_deviation(partial_trace(k, 1, 1), scaled(a, Complex(2.0))), 1e-12);
  EXPECT_THROW(partial_trace(ComplexTensor({2}, {3}), 0, 0), ShapeMismatch);
}

TEST(Regroup, PermutesLegs) {
  ComplexTensor t({2, 3}, {});
  for (std::size_t i = 0; i < 6; ++i) t.entries()[i] = static_cast<double>(i);
  const auto s = regroup(t, {1, 0}, 2);
  EXPECT_EQ(s.row_legs(), (Legs{3, 2}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(j * 2 + i, 0), t(i * 3 + j, 0));
  EXPECT_EQ(regroup(s, {1, 0}, 2), t);
}

TEST(ComposeHelpers, AgreeWithKron) {
  Rng rng(11);
  const ComplexTensor g = from_matrix(random_gaussian(2, 3, rng), {2}, {3});
  const ComplexTensor t = from_matrix(random_gaussian(12, 4, rng), {4, 3}, {4});
  const auto direct = contract(kron(identity<ComplexModel>(4), g), t);
  EXPECT_LE(max_deviation(compose_at_output(g, t, 1), direct), 1e-12);

  const ComplexTensor u = from_matrix(random_gaussian(5, 6, rng), {5}, {2, 3});
  const ComplexTensor h = from_matrix(random_gaussian(3, 4, rng), {3}, {4});
  const auto direct_in = contract(u, kron(identity<ComplexModel>(2), h));
  EXPECT_LE(max_deviation(compose_at_input(u, h, 1), direct_in), 1e-12);
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(identity<ComplexModel>(2)));
  ComplexTensor x({2}, {2});
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  EXPECT_FALSE(is_psd(x));
  EXPECT_NEAR(psd_report(to_matrix(x)).min_eigenvalue, -1.0, 1e-12);
  EXPECT_THROW(is_psd(ComplexTensor({2}, {3})), ShapeMismatch);
}

TEST(IsPsd, GramMatricesArePositive) {
  Rng rng(13);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int t = 0; t < 200; ++t) {
    const auto n = dim(rng);
    const Matrix h = random_gaussian(n, n, rng);
    EXPECT_TRUE(is_psd(square_from_matrix(h.adjoint() * h)));
  }
}
