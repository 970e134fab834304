#include <gtest/gtest.h>

#include "cpstar/category.hpp"
#include "support/cp_maps.hpp"

using namespace cpstar;
using namespace cpstar::testing;

namespace {

const ComplexAlgebra kP2 = pair_of_pants<ComplexModel>(2);

Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

CPStarMorphism scaled_morphism(const CPStarMorphism& f, double s) { return {f.dom, f.cod, scaled(f.map, Complex(s))}; }

ComplexTensor matrix_state(std::initializer_list<Complex> entries) {
  return ComplexTensor({entries.size()}, {}, std::vector<Complex>(entries));
}

}  // namespace

TEST(CheckCpstar, Examples) {
  const auto id = check_cpstar(identity_morphism(kP2));
  EXPECT_TRUE(id.cp);
  ASSERT_TRUE(id.witness.has_value());
  EXPECT_EQ(id.witness->ancilla_dim, 1u);
  EXPECT_LE(id.witness_residual, 1e-10);

  const auto t = check_cpstar(transpose_map(2));
  EXPECT_FALSE(t.cp);
  ASSERT_TRUE(t.certificate.has_value());
  EXPECT_NEAR(t.certificate->min_eigenvalue, -1.0, 1e-9);
  EXPECT_EQ(t.certificate->cod_block, 0u);
  EXPECT_EQ(t.certificate->dom_block, 0u);

  const auto tr = check_cpstar(trace_map(2));
  EXPECT_TRUE(tr.cp);
  EXPECT_LE(tr.witness_residual, 1e-10);
  // Linear functionals g_x with sum conj(g_x(a)) g_x(b) = Tr(a* b) need four of them.
  EXPECT_EQ(tr.witness->ancilla_dim, 4u);
}

TEST(CheckCpstar, NeedsNormalisers) {
  const CPStarMorphism f(kP2.without_normaliser(), kP2, identity<ComplexModel>(4));
  EXPECT_THROW(check_cpstar(f), MissingNormaliser);
}

TEST(CheckCpstar, ShapeIsCheckedAtConstruction) {
  EXPECT_THROW(CPStarMorphism(kP2, kP2, identity<ComplexModel>(3)), ShapeMismatch);
}

TEST(CheckCpstar, RandomCpMapsPassWithWitness) {
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_conjugate(random_block_sizes(rng, 9), rng);
    const auto b = random_conjugate(random_block_sizes(rng, 9), rng);
    const auto f = random_cp_morphism(a, b, rng);
    const auto d = check_cpstar(f);
    EXPECT_TRUE(d.cp) << "min eigenvalue " << d.min_eigenvalue;
    ASSERT_TRUE(d.witness.has_value());
    EXPECT_LE(d.witness_residual, 1e-8 * std::max(1.0, max_abs(f.matrix())));
  }
}

TEST(CheckCpstar, NonCpMapsFailWithCertificate) {
  Rng rng(22);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_conjugate(random_block_sizes(rng, 9), rng);
    const auto b = random_conjugate(random_block_sizes(rng, 9), rng);
    const auto f = transported(a, b, random_block_non_cp(a.sizes, b.sizes, rng));
    const auto d = check_cpstar(f);
    EXPECT_FALSE(d.cp);
    ASSERT_TRUE(d.certificate.has_value());
    EXPECT_LT(d.certificate->min_eigenvalue, 0.0);
    EXPECT_EQ(d.certificate->eigenvector.size(),
              static_cast<Eigen::Index>(d.dom_blocks[d.certificate->dom_block] * d.cod_blocks[d.certificate->cod_block]));
  }
}

TEST(CheckCpstar, ScaledObjects) {
  Rng rng(23);
  const Matrix ba = random_orthogonal_basis(2, rng);
  const Matrix bb = random_orthogonal_basis(3, rng);
  Matrix m(3, 2);
  m << 0.2, 0.5, 0.3, 0.0, 0.5, 0.5;
  const auto f = channel_from_stochastic(m, ba, bb);
  const auto d = check_cpstar(f);
  EXPECT_TRUE(d.cp);
  EXPECT_LE(d.witness_residual, 1e-8);
  Matrix neg = m;
  neg(0, 0) = -0.2;
  EXPECT_FALSE(check_cpstar(channel_from_stochastic(neg, ba, bb)).cp);
}

TEST(Compose, Examples) {
  Rng rng(24);
  const auto a = random_conjugate({2}, rng);
  const auto b = random_conjugate({1, 1}, rng);
  const auto f = random_cp_morphism(a, b, rng);
  EXPECT_LE(max_deviation(compose(identity_morphism(b.algebra), f).map, f.map), 1e-12);
  EXPECT_LE(max_deviation(compose(f, identity_morphism(a.algebra)).map, f.map), 1e-12);

  const auto s = compose(trace_map(2), unital_embedding(2));
  EXPECT_NEAR(s.map(0, 0).real(), 2.0, 1e-12);
  EXPECT_TRUE(check_cpstar(s).cp);

  EXPECT_THROW(compose(f, f), ObjectMismatch);
}

TEST(Compose, ClosureOnRandomPairs) {
  Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_conjugate(random_block_sizes(rng, 5), rng);
    const auto b = random_conjugate(random_block_sizes(rng, 5), rng);
    const auto c = random_conjugate(random_block_sizes(rng, 5), rng);
    const auto f = random_cp_morphism(a, b, rng);
    const auto g = random_cp_morphism(b, c, rng);
    EXPECT_TRUE(check_cpstar(compose(g, f), {}, false).cp);
  }
}

TEST(Tensor, UnitObjectAndClosure) {
  Rng rng(26);
  const auto a = random_conjugate({1, 1}, rng);
  const auto b = random_conjugate({2}, rng);
  const auto f = random_cp_morphism(a, b, rng);
  const auto ft = tensor(f, identity_morphism(trivial_algebra<ComplexModel>()));
  EXPECT_LE(max_deviation(ft.map, f.map), 1e-12);
  EXPECT_TRUE(same_structure(ft.dom, f.dom));

  for (int t = 0; t < 10; ++t) {
    const auto x = random_conjugate(random_block_sizes(rng, 4, 2), rng);
    const auto y = random_conjugate(random_block_sizes(rng, 4, 2), rng);
    const auto g = random_cp_morphism(x, y, rng);
    EXPECT_TRUE(check_cpstar(tensor(f, g), {}, false).cp);
  }
}

TEST(Tensor, WithTransposeFails) {
  const auto d = check_cpstar(tensor(identity_morphism(kP2), transpose_map(2)), {}, false);
  EXPECT_FALSE(d.cp);
  // Choi of id (x) T is the unnormalised maximally entangled projector (x) swap.
  EXPECT_NEAR(d.certificate->min_eigenvalue, -2.0, 1e-9);
}

TEST(Dagger, Examples) {
  const auto id = dagger_morphism(identity_morphism(kP2));
  EXPECT_LE(max_deviation(id.map, identity<ComplexModel>(4)), 0.0);
  const auto tr = dagger_morphism(trace_map(2));
  EXPECT_LE(max_deviation(tr.map, unital_embedding(2).map), 0.0);
  EXPECT_TRUE(check_cpstar(tr).cp);

  Rng rng(27);
  const auto a = random_conjugate({2, 1}, rng);
  const auto b = random_conjugate({1, 1, 1}, rng);
  const auto f = random_cp_morphism(a, b, rng);
  EXPECT_EQ(dagger_morphism(dagger_morphism(f)).map, f.map);
  EXPECT_TRUE(check_cpstar(dagger_morphism(f)).cp);
}

TEST(StarHomomorphism, Examples) {
  Rng rng(28);
  const auto u = random_unitary(2, rng);
  EXPECT_TRUE(is_star_homomorphism(pure_embed(u)));
  const auto t = star_homomorphism_report(transpose_map(2));
  EXPECT_FALSE(t.holds);
  EXPECT_GT(t.multiplicative_residual, 0.5);
  EXPECT_LE(t.star_residual, 1e-12);

  for (int k = 0; k < 10; ++k) {
    const auto c = random_conjugate(random_block_sizes(rng, 9), rng);
    const auto sf = standard_form(c.algebra);
    const CPStarMorphism iso(c.algebra, sf.block_model, sf.iso_tensor());
    EXPECT_TRUE(is_star_homomorphism(iso, 1e-8));
    EXPECT_TRUE(check_cpstar(iso).cp);
  }
}

TEST(StarHomomorphism, SampledHomomorphismsAreCp) {
  // Block embeddings x -> diag(U x U^dagger, x) and projections onto one block.
  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_conjugate({2}, rng);
    const auto b = random_conjugate({2, 2}, rng);
    Matrix emb = Matrix::Zero(8, 4);
    const Matrix v = random_unitary(2, rng);
    add_kraus(emb, {2}, {2, 2}, 0, 0, v);
    add_kraus(emb, {2}, {2, 2}, 1, 0, Matrix::Identity(2, 2));
    const auto f = transported(a, b, emb);
    EXPECT_TRUE(is_star_homomorphism(f, 1e-9));
    EXPECT_TRUE(check_cpstar(f).cp);
    Matrix proj = Matrix::Zero(4, 8);
    add_kraus(proj, {2, 2}, {2}, 0, 1, Matrix::Identity(2, 2));
    const auto p = transported(b, a, proj);
    EXPECT_TRUE(is_star_homomorphism(p, 1e-9));
    EXPECT_TRUE(check_cpstar(p).cp);
  }
}

TEST(PositiveElement, Examples) {
  const auto trivial = trivial_algebra<ComplexModel>();
  EXPECT_TRUE(is_positive_element(CPStarMorphism(trivial, kP2, reshape(kP2.unit(), {4}, {1}))));
  EXPECT_FALSE(is_positive_element(CPStarMorphism(trivial, kP2, reshape(matrix_state({1, 0, 0, -1}), {4}, {1}))));
  const auto mixed = CPStarMorphism(trivial, kP2, reshape(matrix_state({0.5, 0, 0, 0.5}), {4}, {1}));
  EXPECT_TRUE(is_positive_element(mixed));
  EXPECT_TRUE(check_cpstar(mixed).cp);
  EXPECT_THROW(is_positive_element(identity_morphism(kP2)), ObjectMismatch);
}

TEST(PositiveElement, AgreesWithCheckCpstar) {
  Rng rng(30);
  const auto trivial = trivial_algebra<ComplexModel>();
  for (int t = 0; t < 20; ++t) {
    const auto c = random_conjugate(random_block_sizes(rng, 6), rng);
    ComplexTensor x = random_element(c.algebra.dim(), rng);
    x = scaled(sum(x, star(c.algebra, x)), Complex(0.5));  // Hermitian, indefinite in general
    const CPStarMorphism s(trivial, c.algebra, reshape(x, {c.algebra.dim()}, {1}));
    EXPECT_EQ(is_positive_element(s), check_cpstar(s, {}, false).cp);
    const ComplexTensor p = algebra_product(c.algebra, star(c.algebra, x), x);
    const CPStarMorphism ps(trivial, c.algebra, reshape(p, {c.algebra.dim()}, {1}));
    EXPECT_TRUE(is_positive_element(ps));
    EXPECT_TRUE(check_cpstar(ps, {}, false).cp);
  }
}

TEST(Normalised, Examples) {
  EXPECT_TRUE(is_normalised(identity_morphism(kP2)));
  EXPECT_TRUE(is_normalised(trace_map(2)));
  EXPECT_FALSE(is_normalised(scaled_morphism(identity_morphism(kP2), 2.0)));
  EXPECT_TRUE(is_normalised(depolarizing(3)));
}

TEST(ClassicalChannel, Examples) {
  Matrix m(2, 2);
  m << 0.3, 0.6, 0.7, 0.4;
  const auto r = is_classical_channel(channel_from_stochastic(m));
  EXPECT_TRUE(r.classical);
  EXPECT_TRUE(r.stochastic);
  ASSERT_TRUE(r.matrix.has_value());
  EXPECT_LE(max_abs(*r.matrix - m), 1e-12);

  const auto id = is_classical_channel(identity_morphism(from_orthogonal_basis(standard_basis(3))));
  EXPECT_TRUE(id.stochastic);
  EXPECT_LE(max_abs(*id.matrix - Matrix::Identity(3, 3)), 1e-12);

  const auto into = CPStarMorphism(from_orthogonal_basis(standard_basis(1)), kP2, reshape(kP2.unit(), {4}, {1}));
  EXPECT_FALSE(is_classical_channel(into).classical);
}

TEST(ClassicalChannel, RoundTripOnRotatedBases) {
  Rng rng(31);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const auto n = static_cast<Eigen::Index>(size(rng));
    const auto k = static_cast<Eigen::Index>(size(rng));
    Matrix m(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) total += (m(i, j) = unif(rng)).real();
      m.col(j) /= total;
    }
    const Matrix bd = random_orthogonal_basis(static_cast<std::size_t>(k), rng);
    const Matrix bc = random_orthogonal_basis(static_cast<std::size_t>(n), rng);
    const auto r = is_classical_channel(channel_from_stochastic(m, bd, bc));
    ASSERT_TRUE(r.stochastic);
    // Re-index the recovered matrix by the bases used to build the channel.
    const Matrix recovered = matrix_in_points(channel_from_stochastic(m, bd, bc),
                                              [&] {
                                                std::vector<ComplexTensor> v;
                                                for (Eigen::Index j = 0; j < k; ++j) v.push_back(state_from_vector(bd.col(j)));
                                                return v;
                                              }(),
                                              [&] {
                                                std::vector<ComplexTensor> v;
                                                for (Eigen::Index j = 0; j < n; ++j) v.push_back(state_from_vector(bc.col(j)));
                                                return v;
                                              }());
    EXPECT_LE(max_abs(recovered - m), 1e-9);
    // The reported matrix is m with rows and columns permuted.
    EXPECT_NEAR(r.matrix->real().sum(), m.real().sum(), 1e-9);
  }
}

TEST(ClassicalChannel, RejectsNonStochastic) {
  Matrix neg(2, 2);
  neg << 1.2, 0.5, -0.2, 0.5;
  const auto r = is_classical_channel(channel_from_stochastic(neg));
  EXPECT_FALSE(r.classical);
  EXPECT_FALSE(r.stochastic);
  Matrix sums(2, 2);
  sums << 0.5, 0.5, 0.6, 0.5;
  const auto s = is_classical_channel(channel_from_stochastic(sums));
  EXPECT_TRUE(s.classical);
  EXPECT_FALSE(s.normalised);
  EXPECT_FALSE(s.stochastic);
}

TEST(Cpm, Examples) {
  EXPECT_TRUE(cpm_check(pure_embed(hadamard())));
  EXPECT_FALSE(cpm_check(transpose_map(2)));
  EXPECT_TRUE(cpm_check(depolarizing(3)));
  const auto basis = from_orthogonal_basis(standard_basis(4));
  EXPECT_THROW(cpm_check(identity_morphism(basis)), NotPantsForm);
}

TEST(Cpm, AgreesWithCheckCpstar) {
  Rng rng(32);
  std::uniform_int_distribution<std::size_t> side(1, 3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = side(rng), n = side(rng);
    const Matrix fb = (t % 2 == 0) ? random_block_cp({m}, {n}, rng, 3) : random_block_hermitian({m}, {n}, rng);
    const CPStarMorphism f(pair_of_pants<ComplexModel>(m), pair_of_pants<ComplexModel>(n), square_from_matrix(fb));
    EXPECT_EQ(cpm_check(f), check_cpstar(f, {}, false).cp);
  }
}

TEST(PureEmbed, Examples) {
  EXPECT_LE(max_deviation(pure_embed(Matrix(Matrix::Identity(2, 2))).map, identity<ComplexModel>(4)), 0.0);
  EXPECT_TRUE(is_normalised(pure_embed(hadamard())));
  Matrix v(2, 1);
  v << 0.6, Complex(0.0, 0.8);
  const auto d = check_cpstar(pure_embed(v));
  EXPECT_TRUE(d.cp);
  EXPECT_EQ(d.witness->ancilla_dim, 1u);
  EXPECT_LE(d.witness_residual, 1e-10);
}

TEST(PureEmbed, Functorial) {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const Matrix u = random_gaussian(3, 2, rng);
    const Matrix w = random_gaussian(2, 2, rng);
    const auto lhs = pure_embed(Matrix(u * w));
    const auto rhs = compose(pure_embed(u), pure_embed(w));
    EXPECT_LE(max_deviation(lhs.map, rhs.map), 1e-12);
    EXPECT_TRUE(check_cpstar(lhs, {}, false).cp);
  }
}

TEST(Reshuffle, Examples) {
  const auto r1 = reshuffle(1, 3);
  EXPECT_LE(max_deviation(r1.map, identity<ComplexModel>(9)), 0.0);
  for (std::size_t a = 1; a <= 3; ++a)
    for (std::size_t b = 1; b <= 3; ++b) {
      const auto r = reshuffle(a, b);
      const auto rep = star_homomorphism_report(r);
      EXPECT_TRUE(rep.holds) << a << "x" << b;
      EXPECT_LE(rep.multiplicative_residual, 1e-9);
      EXPECT_LE(max_abs(r.matrix().adjoint() * r.matrix() - Matrix::Identity(r.map.cols(), r.map.cols())), 0.0);
    }
}

TEST(Reshuffle, Naturality) {
  Rng rng(34);
  for (int t = 0; t < 10; ++t) {
    const Matrix u = random_unitary(2, rng);
    const Matrix v = random_unitary(3, rng);
    Matrix uv(6, 6);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) uv.block(i * 3, j * 3, 3, 3) = u(i, j) * v;
    const auto lhs = compose(reshuffle(2, 3), pure_embed(uv));
    const auto rhs = compose(tensor(pure_embed(u), pure_embed(v)), reshuffle(2, 3));
    EXPECT_LE(max_deviation(lhs.map, rhs.map), 1e-10);
  }
}

TEST(ConvolutionForm, AgreesWithCheckCpstar) {
  Rng rng(35);
  for (int t = 0; t < 60; ++t) {
    const auto a = random_conjugate(random_block_sizes(rng, 5), rng);
    const auto b = random_conjugate(random_block_sizes(rng, 5), rng);
    Matrix fb;
    switch (t % 3) {
      case 0: fb = random_block_cp(a.sizes, b.sizes, rng); break;
      case 1: fb = random_block_non_cp(a.sizes, b.sizes, rng); break;
      default: fb = random_block_hermitian(a.sizes, b.sizes, rng); break;
    }
    const auto f = transported(a, b, fb);
    const auto conv = convolution_form_check(f);
    EXPECT_EQ(conv.holds, check_cpstar(f, {}, false).cp) << "residual " << conv.residual;
    EXPECT_EQ(psd_report(generalized_choi(f)).psd, conv.holds);
  }
}

TEST(ConvolutionForm, ExamplesAndScaledObjects) {
  EXPECT_TRUE(convolution_form_check(identity_morphism(kP2)).holds);
  EXPECT_FALSE(convolution_form_check(transpose_map(2)).holds);
  EXPECT_TRUE(convolution_form_check(trace_map(3)).holds);
  Rng rng(36);
  const auto s = from_orthogonal_basis(random_orthogonal_basis(3, rng));
  EXPECT_TRUE(convolution_form_check(identity_morphism(s)).holds);
}

TEST(CompletePositivity, AncillaTest) {
  // f passes iff f (x) id on pants(k) keeps sampled positive elements positive.
  Rng rng(37);
  auto survives = [&](const CPStarMorphism& f, std::size_t k) {
    const auto anc = identity_morphism(pair_of_pants<ComplexModel>(k));
    const auto big = tensor(f, anc);
    const auto sf_dom = standard_form(big.dom);
    const auto sf_cod = standard_form(big.cod);
    for (int s = 0; s < 6; ++s) {
      const Vector b = random_vector(big.dom.dim(), rng);
      Vector p = left_matrix(big.dom, star_matrix(big.dom) * b.conjugate()) * b;
      // High powers push towards a rank-one positive element.
      for (int r = 0; r < 3 && s % 2 == 1; ++r) {
        p = left_matrix(big.dom, p) * p;
        p /= p.norm();
      }
      if (!positivity(sf_dom, p).positive) return false;  // sampling went wrong
      if (!positivity(sf_cod, big.matrix() * p, {1e-9, 1e-9}).positive) return false;
    }
    return true;
  };
  const auto t = transpose_map(2);
  EXPECT_FALSE(survives(t, 2));
  EXPECT_TRUE(survives(identity_morphism(kP2), 2));
  for (int i = 0; i < 4; ++i) {
    const auto a = random_conjugate({2}, rng);
    const auto b = random_conjugate({1, 1}, rng);
    const auto f = random_cp_morphism(a, b, rng);
    EXPECT_TRUE(check_cpstar(f, {}, false).cp);
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_TRUE(survives(f, k));
  }
}
