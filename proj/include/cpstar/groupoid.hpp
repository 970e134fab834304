#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cpstar/frobenius.hpp"

// Finite groupoids as Frobenius algebras in the boolean model, relations
// between them, and exhaustive enumeration at small sizes.
namespace cpstar {

// Morphisms are 0..n-1, objects 0..k-1. comp[g * n + f] holds g o f when defined.
struct Groupoid {
  std::size_t object_count = 0;
  std::vector<std::size_t> dom;
  std::vector<std::size_t> cod;
  std::vector<std::size_t> ids;  // identity morphism of each object
  std::vector<std::size_t> inv;
  std::vector<std::optional<std::size_t>> comp;

  std::size_t size() const { return dom.size(); }
  std::optional<std::size_t> compose(std::size_t g, std::size_t f) const { return comp.at(g * size() + f); }
  bool operator==(const Groupoid&) const = default;
};

struct GroupoidCheck {
  bool valid = true;
  std::vector<std::string> violations;
};

inline GroupoidCheck verify_groupoid(const Groupoid& g) {
  const std::size_t n = g.size();
  const std::size_t k = g.object_count;
  if (g.cod.size() != n || g.inv.size() != n || g.ids.size() != k || g.comp.size() != n * n) {
    throw InvalidGroupoid("groupoid tables have inconsistent sizes");
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (g.dom[f] >= k || g.cod[f] >= k || g.inv[f] >= n) throw InvalidGroupoid("dangling reference in groupoid tables");
  }
  for (std::size_t x : g.ids)
    if (x >= n) throw InvalidGroupoid("identity refers to a missing morphism");
  for (const auto& c : g.comp)
    if (c && *c >= n) throw InvalidGroupoid("composite refers to a missing morphism");

  GroupoidCheck out;
  auto fail = [&](std::string s) {
    out.valid = false;
    out.violations.push_back(std::move(s));
  };
  auto name = [](std::size_t x) { return std::to_string(x); };
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t i = g.ids[a];
    if (g.dom[i] != a || g.cod[i] != a) fail("identity of object " + name(a) + " is not an endomorphism of it");
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto c = g.compose(x, y);
      const bool composable = g.dom[x] == g.cod[y];
      if (composable != c.has_value()) {
        fail("composite " + name(x) + "o" + name(y) + (composable ? " missing" : " defined for a non-composable pair"));
      } else if (c && (g.dom[*c] != g.dom[y] || g.cod[*c] != g.cod[x])) {
        fail("composite " + name(x) + "o" + name(y) + " has the wrong type");
      }
    }
  if (!out.valid) return out;
  for (std::size_t f = 0; f < n; ++f) {
    if (g.compose(f, g.ids[g.dom[f]]) != f || g.compose(g.ids[g.cod[f]], f) != f) {
      fail("identities are not neutral for " + name(f));
    }
    if (g.dom[g.inv[f]] != g.cod[f] || g.cod[g.inv[f]] != g.dom[f] || g.compose(g.inv[f], f) != g.ids[g.dom[f]] ||
        g.compose(f, g.inv[f]) != g.ids[g.cod[f]]) {
      fail("inverse law fails for " + name(f));
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        const auto yz = g.compose(y, z);
        const auto xy = g.compose(x, y);
        if (!yz || !xy) continue;
        if (g.compose(x, *yz) != g.compose(*xy, z)) fail("associativity fails at " + name(x) + "," + name(y) + "," + name(z));
      }
  return out;
}

// Fills in objects, domains, codomains and inverses from a composition table.
// Throws InvalidGroupoid if the table is not that of a groupoid.
inline Groupoid groupoid_from_table(std::size_t n, const std::vector<std::optional<std::size_t>>& comp) {
  if (comp.size() != n * n) throw InvalidGroupoid("composition table has the wrong size");
  Groupoid g;
  g.comp = comp;
  auto at = [&](std::size_t x, std::size_t y) { return comp[x * n + y]; };
  // identities: idempotents
  std::vector<std::size_t> object_of(n, n);
  for (std::size_t e = 0; e < n; ++e) {
    if (at(e, e) == e) {
      object_of[e] = g.ids.size();
      g.ids.push_back(e);
    }
  }
  g.object_count = g.ids.size();
  g.dom.assign(n, 0);
  g.cod.assign(n, 0);
  g.inv.assign(n, 0);
  for (std::size_t f = 0; f < n; ++f) {
    std::optional<std::size_t> d, c;
    for (std::size_t e : g.ids) {
      if (at(f, e) == f) d = object_of[e];
      if (at(e, f) == f) c = object_of[e];
    }
    if (!d || !c) throw InvalidGroupoid("morphism " + std::to_string(f) + " has no identity on one side");
    g.dom[f] = *d;
    g.cod[f] = *c;
  }
  for (std::size_t f = 0; f < n; ++f) {
    std::optional<std::size_t> inverse;
    for (std::size_t h = 0; h < n && !inverse; ++h)
      if (at(h, f) == g.ids[g.dom[f]] && at(f, h) == g.ids[g.cod[f]]) inverse = h;
    if (!inverse) throw InvalidGroupoid("morphism " + std::to_string(f) + " has no inverse");
    g.inv[f] = *inverse;
  }
  const GroupoidCheck check = verify_groupoid(g);
  if (!check.valid) throw InvalidGroupoid(check.violations.front());
  return g;
}

// One object per morphism, identities only.
inline Groupoid discrete(std::size_t n) {
  std::vector<std::optional<std::size_t>> comp(n * n);
  for (std::size_t i = 0; i < n; ++i) comp[i * n + i] = i;
  return groupoid_from_table(n, comp);
}

// The cyclic group of order n on one object; morphism 0 is the identity.
inline Groupoid cyclic(std::size_t n) {
  std::vector<std::optional<std::size_t>> comp(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) comp[i * n + j] = (i + j) % n;
  return groupoid_from_table(n, comp);
}

// Morphism (a2, a1) : a1 -> a2 has index a2 * n + a1; (b2,b1) o (a2,a1) = (b2,a1) when b1 = a2.
inline Groupoid indiscrete(std::size_t n) {
  if (n == 0) throw InvalidGroupoid("indiscrete groupoid needs at least one object");
  const std::size_t m = n * n;
  std::vector<std::optional<std::size_t>> comp(m * m);
  for (std::size_t b2 = 0; b2 < n; ++b2)
    for (std::size_t b1 = 0; b1 < n; ++b1)
      for (std::size_t a1 = 0; a1 < n; ++a1) comp[(b2 * n + b1) * m + (b1 * n + a1)] = b2 * n + a1;
  return groupoid_from_table(m, comp);
}

inline Groupoid disjoint_union(const Groupoid& a, const Groupoid& b) {
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<std::optional<std::size_t>> comp(n * n);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < na; ++y) comp[x * n + y] = a.compose(x, y);
  for (std::size_t x = 0; x < nb; ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      const auto c = b.compose(x, y);
      if (c) comp[(na + x) * n + na + y] = na + *c;
    }
  return groupoid_from_table(n, comp);
}

// mult = {((g,f), g o f)}, unit = {identities}, normaliser = id.
inline BoolAlgebra groupoid_to_algebra(const Groupoid& g) {
  const GroupoidCheck check = verify_groupoid(g);
  if (!check.valid) throw InvalidGroupoid("groupoid_to_algebra: " + check.violations.front());
  const std::size_t n = g.size();
  BoolTensor mult({n}, {n, n});
  BoolTensor unit({n}, {});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (const auto c = g.compose(x, y)) mult(*c, x * n + y) = 1;
  for (std::size_t e : g.ids) unit(e, 0) = 1;
  return BoolAlgebra(std::move(mult), std::move(unit), identity<BooleanModel>(n));
}

inline Groupoid algebra_to_groupoid(const BoolAlgebra& a) {
  const AxiomReport r = verify_axioms(a, 0.0);
  if (!r.associative.pass) throw NotAGroupoidAlgebra("associativity", "");
  if (!r.unital.pass) throw NotAGroupoidAlgebra("unitality", "");
  if (!r.frobenius_law.pass) throw NotAGroupoidAlgebra("frobenius law", "");
  if (!r.special.pass) throw NotAGroupoidAlgebra("speciality", "mult o comult differs from the identity");
  const std::size_t n = a.dim();
  std::vector<std::optional<std::size_t>> comp(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (!a.mult()(z, x * n + y)) continue;
        if (comp[x * n + y]) throw NotAGroupoidAlgebra("single-valued", "product of two elements is not unique");
        comp[x * n + y] = z;
      }
  Groupoid g;
  try {
    g = groupoid_from_table(n, comp);
  } catch (const InvalidGroupoid& e) {
    throw NotAGroupoidAlgebra("groupoid", e.what());
  }
  for (std::size_t e = 0; e < n; ++e) {
    const bool is_id = std::find(g.ids.begin(), g.ids.end(), e) != g.ids.end();
    if (is_id != (a.unit()(e, 0) != 0)) throw NotAGroupoidAlgebra("unit", "unit is not the set of identities");
  }
  return g;
}

// A relation from a set of size source to a set of size target.
struct Relation {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::uint8_t> entries;  // entries[a * target + b] for (a, b)

  Relation() = default;
  Relation(std::size_t s, std::size_t t) : source(s), target(t), entries(s * t, 0) {}
  bool contains(std::size_t a, std::size_t b) const { return entries.at(a * target + b) != 0; }
  void insert(std::size_t a, std::size_t b) { entries.at(a * target + b) = 1; }
  bool operator==(const Relation&) const = default;

  // As a morphism source -> target: rows are target elements.
  BoolTensor tensor() const {
    BoolTensor t({target}, {source});
    for (std::size_t a = 0; a < source; ++a)
      for (std::size_t b = 0; b < target; ++b) t(b, a) = entries[a * target + b];
    return t;
  }
  static Relation from_tensor(const BoolTensor& t) {
    Relation r(t.cols(), t.rows());
    for (std::size_t a = 0; a < r.source; ++a)
      for (std::size_t b = 0; b < r.target; ++b)
        if (t(b, a)) r.insert(a, b);
    return r;
  }
};

inline Relation compose(const Relation& s, const Relation& r) {
  if (r.target != s.source) throw ShapeMismatch("relation composition: middle sets differ");
  return Relation::from_tensor(contract(s.tensor(), r.tensor()));
}

inline Relation converse(const Relation& r) { return Relation::from_tensor(dagger(r.tensor())); }

inline Relation graph(const std::vector<std::size_t>& f, std::size_t target) {
  Relation r(f.size(), target);
  for (std::size_t a = 0; a < f.size(); ++a) r.insert(a, f[a]);
  return r;
}

inline bool respects_inverses(const Relation& r, const Groupoid& g, const Groupoid& h) {
  if (r.source != g.size() || r.target != h.size()) throw ShapeMismatch("respects_inverses: relation does not match");
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < h.size(); ++y) {
      if (!r.contains(x, y)) continue;
      if (!r.contains(g.inv[x], h.inv[y])) return false;
      if (!r.contains(g.ids[g.dom[x]], h.ids[h.dom[y]])) return false;
    }
  return true;
}

struct RelCpDecision {
  bool cp = false;
  BoolTensor choi = BoolTensor({1}, {1});   // on cod x dom
  std::optional<BoolTensor> witness;         // V with choi = V V^dagger, rows {cod, dom}
  std::size_t ancilla_dim = 0;
  bool symmetric = false;
  bool support_reflexive = false;
  std::optional<bool> respects_inverses;  // filled in by the groupoid overload
};

// Boolean CP*-condition. The action form
//   C[(b1,a1),(b2,a2)] = exists y, a: mult_B[b1; y, b2], R[y; a], mult_A[a1; a, a2]
// must factor as V V^dagger. In Rel that happens exactly when C is symmetric
// and C(s,t) implies C(s,s); V then has one ancilla point per pair in C.
inline RelCpDecision check_cpstar_rel(const BoolTensor& r, const BoolAlgebra& dom, const BoolAlgebra& cod) {
  const std::size_t da = dom.dim(), db = cod.dim();
  if (r.rows() != db || r.cols() != da) throw ShapeMismatch("check_cpstar_rel: relation does not match the objects");
  const std::size_t s = da * db;
  RelCpDecision out;
  out.choi = BoolTensor({db, da}, {db, da});
  const BoolTensor& ma = dom.mult();
  const BoolTensor& mb = cod.mult();
  for (std::size_t y = 0; y < db; ++y)
    for (std::size_t a = 0; a < da; ++a) {
      if (!r(y, a)) continue;
      for (std::size_t b1 = 0; b1 < db; ++b1)
        for (std::size_t b2 = 0; b2 < db; ++b2) {
          if (!mb(b1, y * db + b2)) continue;
          for (std::size_t a1 = 0; a1 < da; ++a1)
            for (std::size_t a2 = 0; a2 < da; ++a2)
              if (ma(a1, a * da + a2)) out.choi(b1 * da + a1, b2 * da + a2) = 1;
        }
    }
  out.symmetric = true;
  out.support_reflexive = true;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < s; ++u)
    for (std::size_t v = 0; v < s; ++v) {
      if (!out.choi(u, v)) continue;
      edges.emplace_back(u, v);
      out.symmetric = out.symmetric && out.choi(v, u);
      out.support_reflexive = out.support_reflexive && out.choi(u, u);
    }
  out.cp = out.symmetric && out.support_reflexive;
  if (!out.cp) return out;
  out.ancilla_dim = std::max<std::size_t>(edges.size(), 1);
  BoolTensor v({db, da}, {out.ancilla_dim});
  for (std::size_t x = 0; x < edges.size(); ++x) {
    v(edges[x].first, x) = 1;
    v(edges[x].second, x) = 1;
  }
  if (!(contract(v, dagger(v)) == out.choi)) throw Error("check_cpstar_rel: witness does not reproduce the action form");
  out.witness = v;
  return out;
}

inline RelCpDecision check_cpstar_rel(const Relation& r, const Groupoid& g, const Groupoid& h) {
  if (r.source != g.size() || r.target != h.size()) throw ShapeMismatch("check_cpstar_rel: relation does not match");
  RelCpDecision d = check_cpstar_rel(r.tensor(), groupoid_to_algebra(g), groupoid_to_algebra(h));
  d.respects_inverses = respects_inverses(r, g, h);
  return d;
}

// Lexicographically least composition table over all relabellings of the morphisms.
inline std::vector<int> canonical_form(const Groupoid& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    // perm[old] = new
    std::vector<int> code(n * n, -1);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (const auto c = g.compose(x, y)) code[perm[x] * n + perm[y]] = static_cast<int>(perm[*c]);
    if (best.empty() || code < best) best = code;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every groupoid composition table on morphisms 0..n-1, built directly from
// objects, hom-sets and composites.
inline std::vector<Groupoid> enumerate_groupoids(std::size_t n) {
  if (n > 4) throw SizeBoundExceeded("enumerate_groupoids: n must be at most 4");
  std::vector<Groupoid> out;
  if (n == 0) return out;
  const std::size_t m = n * n;
  // Choose the identity set, then dom and cod for the rest, then composites.
  for (std::uint32_t idmask = 1; idmask < (1u << n); ++idmask) {
    std::vector<std::size_t> ids;
    std::vector<std::size_t> object_of(n, n);
    for (std::size_t e = 0; e < n; ++e)
      if (idmask & (1u << e)) {
        object_of[e] = ids.size();
        ids.push_back(e);
      }
    const std::size_t k = ids.size();
    std::vector<std::size_t> others;
    for (std::size_t f = 0; f < n; ++f)
      if (!(idmask & (1u << f))) others.push_back(f);
    std::size_t typings = 1;
    for (std::size_t i = 0; i < others.size(); ++i) typings *= k * k;
    for (std::size_t t = 0; t < typings; ++t) {
      std::vector<std::size_t> dom(n), cod(n);
      for (std::size_t e : ids) dom[e] = cod[e] = object_of[e];
      std::size_t code = t;
      for (std::size_t f : others) {
        dom[f] = code % k;
        cod[f] = (code / k) % k;
        code /= k * k;
      }
      // composable pairs and their candidate composites
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      std::vector<std::vector<std::size_t>> candidates;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          if (dom[x] != cod[y]) continue;
          std::vector<std::size_t> c;
          for (std::size_t z = 0; z < n; ++z)
            if (dom[z] == dom[y] && cod[z] == cod[x]) c.push_back(z);
          pairs.emplace_back(x, y);
          candidates.push_back(std::move(c));
        }
      bool empty = false;
      for (const auto& c : candidates) empty = empty || c.empty();
      if (empty) continue;
      // Composites with an identity are forced; the rest are filled depth first,
      // keeping each row and column injective (cancellation) and associativity
      // checked on every fully defined triple.
      std::vector<std::optional<std::size_t>> comp(m);
      std::vector<std::size_t> open;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [x, y] = pairs[p];
        if (idmask & (1u << x)) {
          comp[x * n + y] = y;
        } else if (idmask & (1u << y)) {
          comp[x * n + y] = x;
        } else {
          open.push_back(p);
        }
      }
      auto consistent = [&](std::size_t x, std::size_t y) {
        const std::size_t z = *comp[x * n + y];
        for (std::size_t w = 0; w < n; ++w) {
          if (w != y && comp[x * n + w] == z) return false;
          if (w != x && comp[w * n + y] == z) return false;
        }
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
              const auto bc = comp[b * n + c];
              const auto ab = comp[a * n + b];
              if (!bc || !ab) continue;
              const auto l = comp[a * n + *bc];
              const auto r = comp[*ab * n + c];
              if (l && r && *l != *r) return false;
            }
        return true;
      };
      auto emit = [&]() {
        Groupoid g;
        g.object_count = k;
        g.dom = dom;
        g.cod = cod;
        g.ids = ids;
        g.comp = comp;
        g.inv.assign(n, 0);
        for (std::size_t f = 0; f < n; ++f) {
          bool found = false;
          for (std::size_t h = 0; h < n && !found; ++h) {
            if (dom[h] != cod[f] || cod[h] != dom[f]) continue;
            if (comp[h * n + f] == ids[dom[f]] && comp[f * n + h] == ids[cod[f]]) {
              g.inv[f] = h;
              found = true;
            }
          }
          if (!found) return;
        }
        if (verify_groupoid(g).valid) out.push_back(std::move(g));
      };
      bool forced_ok = true;
      for (const auto& [x, y] : pairs) forced_ok = forced_ok && (!comp[x * n + y] || consistent(x, y));
      if (!forced_ok) continue;
      auto fill = [&](auto&& self, std::size_t depth) -> void {
        if (depth == open.size()) {
          emit();
          return;
        }
        const std::size_t p = open[depth];
        const auto [x, y] = pairs[p];
        for (std::size_t z : candidates[p]) {
          comp[x * n + y] = z;
          if (consistent(x, y)) self(self, depth + 1);
        }
        comp[x * n + y].reset();
      };
      fill(fill, 0);
    }
  }
  return out;
}

struct RelStructure {
  BoolAlgebra algebra;                  // carries the normaliser found
  std::optional<Groupoid> groupoid;     // present when special
  std::vector<std::size_t> normaliser;  // as a permutation
  bool special = false;
};

namespace detail {

// Boolean normaliser search over permutations: central, positive and
// counit = loop o z o z.
inline std::optional<std::vector<std::size_t>> find_rel_normaliser(const BoolAlgebra& a) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const BoolTensor loop = loop_trace(a);
  const BoolTensor id = identity<BooleanModel>(n);
  do {
    BoolTensor z({n}, {n});
    for (std::size_t x = 0; x < n; ++x) z(perm[x], x) = 1;
    // positive in Rel: of the form h^dagger h, i.e. symmetric and support-reflexive
    bool positive = true;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (z(x, y) && (!z(y, x) || !z(x, x))) positive = false;
    if (!positive) continue;
    const BoolTensor zm = contract(z, a.mult());
    if (!(zm == contract(a.mult(), kron(z, id))) || !(zm == contract(a.mult(), kron(id, z)))) continue;
    if (!(contract(loop, contract(z, z)) == a.counit())) continue;
    return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace detail

// All (mult, unit) boolean structures on n points that are dagger Frobenius
// algebras with a normaliser. Units are chosen first; they force most of the
// rows and columns they touch. Remaining products are chosen pair by pair with
// associativity checked as soon as it is decidable.
inline std::vector<RelStructure> enumerate_frobenius_rel(std::size_t n) {
  if (n > 4) throw SizeBoundExceeded("enumerate_frobenius_rel: carrier size must be at most 4");
  std::vector<RelStructure> out;
  if (n == 0) return out;
  const std::size_t m = n * n;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t umask = 1; umask <= full; ++umask) {
    auto in_unit = [&](std::size_t x) { return (umask >> x) & 1u; };
    // options[p] lists the allowed output sets for the pair p = x * n + y
    std::vector<std::vector<std::uint32_t>> options(m);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        std::uint32_t allowed = full;
        if (in_unit(x)) allowed &= (1u << y);
        if (in_unit(y)) allowed &= (1u << x);
        for (std::uint32_t s = 0; s <= full; ++s)
          if ((s & ~allowed) == 0) options[x * n + y].push_back(s);
      }
    std::vector<std::uint32_t> table(m, 0);
    std::vector<bool> assigned(m, false);
    auto product_known = [&](std::uint32_t left, std::size_t z, bool left_side, std::uint32_t& result) {
      // left_side: (set) * z, else z * (set)
      result = 0;
      for (std::size_t d = 0; d < n; ++d) {
        if (!((left >> d) & 1u)) continue;
        const std::size_t p = left_side ? d * n + z : z * n + d;
        if (!assigned[p]) return false;
        result |= table[p];
      }
      return true;
    };
    auto associative_so_far = [&]() {
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          if (!assigned[x * n + y]) continue;
          for (std::size_t z = 0; z < n; ++z) {
            if (!assigned[y * n + z]) continue;
            std::uint32_t lhs, rhs;
            if (!product_known(table[x * n + y], z, true, lhs)) continue;
            if (!product_known(table[y * n + z], x, false, rhs)) continue;
            if (lhs != rhs) return false;
          }
        }
      return true;
    };
    // The snake equations make {(x, y) : x.y meets the unit} the graph of a
    // bijection, so no row or column of it may hold two points.
    auto pairing_so_far = [&]() {
      for (std::size_t x = 0; x < n; ++x) {
        std::size_t row = 0, col = 0;
        for (std::size_t y = 0; y < n; ++y) {
          row += assigned[x * n + y] && (table[x * n + y] & umask) ? 1 : 0;
          col += assigned[y * n + x] && (table[y * n + x] & umask) ? 1 : 0;
        }
        if (row > 1 || col > 1) return false;
      }
      return true;
    };
    auto unital = [&]() {
      for (std::size_t x = 0; x < n; ++x) {
        std::uint32_t left = 0, right = 0;
        for (std::size_t u = 0; u < n; ++u) {
          if (!in_unit(u)) continue;
          left |= table[u * n + x];
          right |= table[x * n + u];
        }
        if (left != (1u << x) || right != (1u << x)) return false;
      }
      return true;
    };
    // Pairs touching the unit first: they are nearly forced.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t p, std::size_t q) { return options[p].size() < options[q].size(); });
    auto emit = [&]() {
      if (!unital()) return;
      BoolTensor mult({n}, {n, n});
      BoolTensor unit({n}, {});
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t z = 0; z < n; ++z)
          if ((table[p] >> z) & 1u) mult(z, p) = 1;
      for (std::size_t u = 0; u < n; ++u)
        if (in_unit(u)) unit(u, 0) = 1;
      BoolAlgebra a(std::move(mult), std::move(unit));
      if (!verify_axioms(a, 0.0).is_frobenius()) return;
      const auto z = detail::find_rel_normaliser(a);
      if (!z) return;
      BoolTensor zt({n}, {n});
      for (std::size_t x = 0; x < n; ++x) zt((*z)[x], x) = 1;
      RelStructure s{a.with_normaliser(zt), std::nullopt, *z, false};
      s.special = classify(a, 0.0).special.pass;
      if (s.special) s.groupoid = algebra_to_groupoid(a);
      out.push_back(std::move(s));
    };
    auto search = [&](auto&& self, std::size_t depth) -> void {
      if (depth == m) {
        emit();
        return;
      }
      const std::size_t p = order[depth];
      for (std::uint32_t s : options[p]) {
        table[p] = s;
        assigned[p] = true;
        if (pairing_so_far() && associative_so_far()) self(self, depth + 1);
        assigned[p] = false;
      }
    };
    search(search, 0);
  }
  // Deterministic order: isomorphism class first, then the tables themselves.
  auto key = [](const RelStructure& s) {
    std::vector<int> k = s.groupoid ? canonical_form(*s.groupoid) : std::vector<int>{};
    for (auto v : s.algebra.mult().entries()) k.push_back(v);
    for (auto v : s.algebra.unit().entries()) k.push_back(v);
    return k;
  };
  std::sort(out.begin(), out.end(), [&](const RelStructure& x, const RelStructure& y) { return key(x) < key(y); });
  return out;
}

}  // namespace cpstar
