// Builds a few maps between matrix algebras and decides which are CP.
#include <cstdio>

#include "cpstar/category.hpp"

using namespace cpstar;

namespace {

void report(const char* name, const CPStarMorphism& f) {
  const CpDecision d = check_cpstar(f);
  if (d.cp) {
    std::printf("%-28s CP, %zu Kraus operators\n", name, d.witness->ancilla_dim);
  } else {
    std::printf("%-28s not CP, Choi eigenvalue %.3f\n", name, d.certificate->min_eigenvalue);
  }
}

}  // namespace

int main() {
  report("identity on 2x2 matrices", identity_morphism(pair_of_pants<ComplexModel>(2)));
  report("transpose", transpose_map(2));
  report("trace", trace_map(2));
  report("depolarizing (d = 3)", depolarizing(3));
  report("trace then unit", compose(unital_embedding(2), trace_map(2)));

  // A classical channel: a column-stochastic matrix between two-point sets.
  Matrix m(2, 2);
  m << 0.3, 0.6, 0.7, 0.4;
  const CPStarMorphism channel = channel_from_stochastic(m);
  report("stochastic matrix", channel);
  const ClassicalChannelReport r = is_classical_channel(channel);
  std::printf("recovered column sums: %.3f %.3f\n", r.matrix->col(0).sum().real(), r.matrix->col(1).sum().real());

  // Block structure of a rotated direct sum.
  Rng rng(1);
  const ComplexAlgebra a = conjugate_by(direct_sum(pair_of_pants<ComplexModel>(1), pair_of_pants<ComplexModel>(2)),
                                        random_unitary(5, rng));
  const StandardForm sf = standard_form(a);
  std::printf("rotated M1 + M2 has blocks");
  for (auto n : sf.block_sizes) std::printf(" %zu", n);
  std::printf("\n");
}
