// Boolean Frobenius algebras and the groupoids they come from.
#include <cstdio>
#include <set>

#include "cpstar/groupoid.hpp"

using namespace cpstar;

int main() {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto structures = enumerate_frobenius_rel(n);
    std::set<std::vector<int>> classes;
    for (const auto& s : structures) classes.insert(canonical_form(*s.groupoid));
    std::printf("%zu points: %zu special Frobenius structures, %zu up to relabelling\n", n, structures.size(),
                classes.size());
  }

  const BoolAlgebra pants = groupoid_to_algebra(indiscrete(3));
  std::printf("indiscrete(3) gives the 3x3 matrix table: %s\n",
              pants.mult() == pair_of_pants<BooleanModel>(3).mult() ? "yes" : "no");

  // Relations from Z2 to the one-point groupoid.
  const Groupoid z2 = cyclic(2);
  const Groupoid point = discrete(1);
  for (unsigned mask = 0; mask < 4; ++mask) {
    Relation r(2, 1);
    for (std::size_t b = 0; b < 2; ++b) r.entries[b] = (mask >> b) & 1u;
    const RelCpDecision d = check_cpstar_rel(r, z2, point);
    std::printf("relation {%s%s} from Z2 to a point: %s\n", r.entries[0] ? "e" : "", r.entries[1] ? "g" : "",
                d.cp ? "CP" : "not CP");
  }
}
