#pragma once

#include <map>
#include <set>

#include "documents.hpp"

namespace cpstar::cli {

inline constexpr const char* kVersion = "0.1.0";

struct CheckResult {
  std::string name;
  bool pass = false;
  std::optional<double> residual;
  json certificate;       // null when absent
  bool required = true;   // informational checks do not affect the exit code
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // name, fnv1a
  std::vector<CheckResult> results;
  json outputs = json::object();
  Tolerance tol;
  std::uint64_t seed = 0;

  void add_input(const std::string& name, std::string_view bytes) { inputs.emplace_back(name, hex64(fnv1a(bytes))); }
  CheckResult& add(std::string name, bool pass, std::optional<double> residual = std::nullopt, json cert = nullptr,
                   bool required = true) {
    results.push_back({std::move(name), pass, residual, std::move(cert), required});
    return results.back();
  }
  bool ok() const {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass || !r.required; });
  }
};

inline json report_to_json(const Report& r) {
  json inputs = json::array();
  for (const auto& [name, hash] : r.inputs) inputs.push_back({{"name", name}, {"fnv1a", hash}});
  json results = json::array();
  for (const auto& c : r.results) {
    json item{{"name", c.name}, {"pass", c.pass}, {"required", c.required}};
    if (c.residual) item["residual"] = *c.residual;
    if (!c.certificate.is_null()) item["certificate"] = c.certificate;
    results.push_back(std::move(item));
  }
  return {{"command", r.command},
          {"version", kVersion},
          {"seed", r.seed},
          {"tolerances", {{"eq", r.tol.eq}, {"eig", r.tol.eig}}},
          {"inputs", inputs},
          {"results", results},
          {"outputs", r.outputs},
          {"pass", r.ok()}};
}

inline void print_human(const Report& r, std::ostream& os) {
  os << r.command << "\n";
  for (const auto& [name, hash] : r.inputs) os << "  input " << name << " (fnv1a " << hash << ")\n";
  std::size_t width = 0;
  for (const auto& c : r.results) width = std::max(width, c.name.size());
  for (const auto& c : r.results) {
    os << "  " << c.name << std::string(width - c.name.size() + 2, ' ');
    if (c.required) {
      os << (c.pass ? "PASS" : "FAIL");
    } else {
      os << (c.pass ? "yes " : "no  ");
    }
    if (c.residual) os << "  residual " << *c.residual;
    if (!c.certificate.is_null()) os << "  " << c.certificate.dump();
    os << "\n";
  }
  for (const auto& [key, value] : r.outputs.items()) os << "  " << key << ": " << value.dump() << "\n";
  os << (r.ok() ? "ok" : "failed") << "\n";
}

// ---- verify ----

namespace detail {

inline void record_scale(Report& rep, const ComplexTensor& z, double tol) {
  const Complex s = z(0, 0);
  if (max_deviation(z, scaled(identity<ComplexModel>(z.rows()), s)) <= tol) rep.outputs["normaliser_scale"] = s.real();
}

inline void verify_normaliser(Report& rep, const ComplexAlgebra& a) {
  const double loose = std::sqrt(rep.tol.eq);
  if (a.has_normaliser()) {
    record_scale(rep, *a.normaliser(), loose);
    const NormaliserResiduals n = normaliser_residuals(a, *a.normaliser());
    const double residual = std::max(n.centrality, n.normalisation);
    rep.add("normaliser", residual <= loose && n.min_eigenvalue > 0.0, residual,
            json{{"centrality", n.centrality}, {"normalisation", n.normalisation}, {"min_eigenvalue", n.min_eigenvalue}});
    rep.outputs["normaliser"] = matrix_to_json<ComplexModel>(*a.normaliser());
    return;
  }
  try {
    const ComplexTensor z = solve_normaliser(a, rep.tol.eq);
    const NormaliserResiduals n = normaliser_residuals(a, z);
    rep.add("normaliser", true, std::max(n.centrality, n.normalisation));
    rep.outputs["normaliser"] = matrix_to_json<ComplexModel>(z);
    record_scale(rep, z, loose);
  } catch (const NoNormaliser& e) {
    rep.add("normaliser", false, std::nullopt, json{{"reason", e.what()}});
  } catch (const NumericalAmbiguity& e) {
    rep.add("normaliser", false, std::nullopt, json{{"reason", e.what()}});
  }
}

inline void verify_normaliser(Report& rep, const BoolAlgebra& a) {
  if (a.has_normaliser()) {
    const bool ok = cpstar::detail::rel_positive(*a.normaliser()) && satisfies_normaliser_equation(a, *a.normaliser());
    rep.add("normaliser", ok, ok ? 0.0 : 1.0, ok ? json(nullptr) : json{{"reason", "supplied normaliser fails"}});
    rep.outputs["normaliser"] = matrix_to_json<BooleanModel>(*a.normaliser());
    return;
  }
  const auto perm = cpstar::detail::find_rel_normaliser(a);
  if (!perm) {
    rep.add("normaliser", false, std::nullopt, json{{"reason", "no permutation normaliser"}});
    return;
  }
  BoolTensor z({a.dim()}, {a.dim()});
  for (std::size_t x = 0; x < a.dim(); ++x) z((*perm)[x], x) = 1;
  rep.add("normaliser", true, 0.0);
  rep.outputs["normaliser"] = matrix_to_json<BooleanModel>(z);
}

template <QuantaleModel Q>
void verify_normaliser(Report& rep, const FrobeniusAlgebra<Q>& a) {
  if (!a.has_normaliser()) {
    rep.add("normaliser", false, std::nullopt,
            json{{"reason", "no normaliser supplied; solving is available for the complex and boolean models"}}, false);
    return;
  }
  const bool ok = satisfies_normaliser_equation(a, *a.normaliser());
  rep.add("normaliser", ok, ok ? 0.0 : 1.0, ok ? json(nullptr) : json{{"reason", "supplied normaliser fails"}});
}

}  // namespace detail

inline Report cmd_verify(const AnyAlgebra& any, Tolerance tol) {
  Report rep;
  rep.command = "verify";
  rep.tol = tol;
  std::visit(
      [&](const auto& a) {
        const AxiomReport r = verify_axioms(a, tol.eq);
        auto add = [&](const char* name, const Check& c, bool required) {
          rep.add(name, c.pass, c.residual, nullptr, required);
        };
        add("associative", r.associative, true);
        add("unital", r.unital, true);
        add("frobenius_law", r.frobenius_law, true);
        add("frobenius_snake", r.frobenius_snake, true);
        add("symmetric", r.symmetric, false);
        add("commutative", r.commutative, false);
        add("special", r.special, false);
        add("normal", r.normal, false);
        rep.outputs["model"] = std::string(std::decay_t<decltype(a)>::model_type::name);
        rep.outputs["dim"] = a.dim();
        if (r.is_frobenius()) {
          detail::verify_normaliser(rep, a);
        } else {
          rep.add("normaliser", false, std::nullopt, json{{"reason", "not a Frobenius algebra"}});
        }
      },
      any);
  return rep;
}

// ---- decompose ----

inline Report cmd_decompose(const ComplexAlgebra& a, Tolerance tol, std::uint64_t seed) {
  Report rep;
  rep.command = "decompose";
  rep.tol = tol;
  rep.seed = seed;
  const double loose = std::sqrt(tol.eq);
  try {
    const StandardForm sf = standard_form(a, tol.eq, seed);
    rep.add("homomorphism", sf.homomorphism_residual <= loose, sf.homomorphism_residual);
    rep.add("unit", sf.unit_residual <= loose, sf.unit_residual);
    rep.add("star", sf.star_residual <= loose, sf.star_residual);
    rep.add("unitary", sf.unitarity_residual <= loose, sf.unitarity_residual, nullptr, false);
    rep.outputs["dim"] = a.dim();
    rep.outputs["block_sizes"] = sf.block_sizes;
    rep.outputs["block_scales"] = sf.block_scales;
  } catch (const StandardFormError& e) {
    rep.add("standard_form", false, std::nullopt, json{{"reason", e.what()}});
  } catch (const NotAnAlgebra& e) {
    rep.add("standard_form", false, std::nullopt, json{{"reason", e.what()}});
  } catch (const NumericalAmbiguity& e) {
    rep.add("standard_form", false, std::nullopt, json{{"reason", e.what()}});
  }
  return rep;
}

// ---- check-cp ----

inline Report cmd_check_cp(const CPStarMorphism& f, Tolerance tol, std::uint64_t seed) {
  Report rep;
  rep.command = "check-cp";
  rep.tol = tol;
  rep.seed = seed;
  const CpDecision d = check_cpstar(f, tol, true, seed);
  rep.outputs["dom_dim"] = f.dom.dim();
  rep.outputs["cod_dim"] = f.cod.dim();
  rep.outputs["dom_blocks"] = d.dom_blocks;
  rep.outputs["cod_blocks"] = d.cod_blocks;
  if (d.cp) {
    rep.add("cpstar", true, d.witness_residual);
    if (d.witness) {
      rep.outputs["kraus"] = {{"ancilla_dim", d.witness->ancilla_dim},
                              {"shape", {d.witness->ancilla_dim, f.cod.dim(), f.dom.dim()}}};
    }
  } else {
    json cert{{"min_eigenvalue", d.min_eigenvalue}};
    if (d.certificate) {
      cert["cod_block"] = d.certificate->cod_block;
      cert["dom_block"] = d.certificate->dom_block;
      cert["hermitian_residual"] = d.certificate->hermitian_residual;
      json v = json::array();
      for (Eigen::Index i = 0; i < d.certificate->eigenvector.size(); ++i)
        v.push_back(entry_to_json<ComplexModel>(d.certificate->eigenvector(i)));
      cert["eigenvector"] = v;
    }
    rep.add("cpstar", false, std::nullopt, cert);
  }

  const StarHomReport sh = star_homomorphism_report(f, tol.eq);
  rep.add("star_homomorphism", sh.holds, std::max(sh.multiplicative_residual, sh.star_residual), nullptr, false);
  const bool normalised = is_normalised(f, std::sqrt(tol.eq));
  rep.add("normalised", normalised, std::nullopt, normalised ? json(nullptr) : json{{"reason", "counit not preserved"}},
          false);

  const ClassicalChannelReport cc = is_classical_channel(f, tol);
  if (cc.matrix) {
    rep.add("classical_channel", cc.stochastic, std::nullopt,
            cc.stochastic ? json(nullptr) : json{{"reason", "not column stochastic in the copyable points"}}, false);
    rep.outputs["stochastic_matrix"] = real_matrix_to_json(*cc.matrix);
    json sums = json::array();
    for (Eigen::Index j = 0; j < cc.matrix->cols(); ++j) sums.push_back(cc.matrix->col(j).sum().real());
    rep.outputs["column_sums"] = sums;
  }

  try {
    const RCPReport rcp = really_cp_check(f, tol);
    rep.add("really_cp", rcp.really_cp, std::nullopt,
            rcp.really_cp ? json(nullptr)
                          : json{{"really_positive", rcp.really_positive},
                                 {"completely_positive", rcp.completely_positive},
                                 {"min_entry", rcp.min_entry}},
            false);
  } catch (const NotStandardBasis&) {
    // only defined for matrix-unit bases
  }
  return rep;
}

// ---- groupoid ----

inline void describe_groupoid(Report& rep, const Groupoid& g) {
  rep.outputs["groupoid"] = groupoid_to_json(g);
  rep.outputs["canonical_form"] = canonical_form(g);
}

inline Report cmd_groupoid_to_algebra(const Groupoid& g) {
  Report rep;
  rep.command = "groupoid to-algebra";
  const BoolAlgebra a = groupoid_to_algebra(g);
  const AxiomReport r = verify_axioms(a, 0.0);
  rep.add("frobenius", r.is_frobenius(), r.is_frobenius() ? 0.0 : 1.0);
  rep.add("special", r.special.pass, r.special.residual);
  describe_groupoid(rep, g);
  rep.outputs["algebra"] = algebra_to_json(a);
  return rep;
}

inline Report cmd_groupoid_from_algebra(const BoolAlgebra& a) {
  Report rep;
  rep.command = "groupoid from-algebra";
  try {
    const Groupoid g = algebra_to_groupoid(a);
    rep.add("groupoid", true, 0.0);
    describe_groupoid(rep, g);
  } catch (const NotAGroupoidAlgebra& e) {
    rep.add("groupoid", false, std::nullopt, json{{"axiom", e.axiom()}, {"detail", e.what()}});
  }
  return rep;
}

inline Report cmd_groupoid_indiscrete(std::size_t n) {
  Report rep;
  rep.command = "groupoid indiscrete";
  const Groupoid g = indiscrete(n);
  const BoolAlgebra a = groupoid_to_algebra(g);
  const BoolAlgebra p = pair_of_pants<BooleanModel>(n);
  const bool same = a.mult() == p.mult() && a.unit() == p.unit();
  rep.add("matches_pants", same, same ? 0.0 : 1.0);
  describe_groupoid(rep, g);
  rep.outputs["algebra"] = algebra_to_json(a);
  return rep;
}

inline Report cmd_groupoid_enumerate(std::size_t n) {
  Report rep;
  rep.command = "groupoid enumerate";
  const auto structures = enumerate_frobenius_rel(n);
  const auto tables = enumerate_groupoids(n);
  rep.add("counts_agree", structures.size() == tables.size(),
          std::abs(static_cast<double>(structures.size()) - static_cast<double>(tables.size())));
  bool all_special = true;
  std::map<std::vector<int>, std::size_t> classes;
  for (const auto& s : structures) {
    all_special = all_special && s.special && s.groupoid;
    if (s.groupoid) ++classes[canonical_form(*s.groupoid)];
  }
  rep.add("all_special", all_special, all_special ? 0.0 : 1.0);
  std::map<std::vector<int>, std::size_t> table_classes;
  for (const auto& g : tables) ++table_classes[canonical_form(g)];
  rep.add("classes_agree", classes == table_classes, classes == table_classes ? 0.0 : 1.0);
  rep.outputs["carrier_size"] = n;
  rep.outputs["frobenius_structures"] = structures.size();
  rep.outputs["groupoid_tables"] = tables.size();
  json listing = json::array();
  for (const auto& [form, count] : classes) listing.push_back({{"canonical_form", form}, {"labellings", count}});
  rep.outputs["classes"] = listing;
  return rep;
}

// ---- quantale ----

template <QuantaleModel Q>
Report cmd_quantale_collapse(const FrobeniusAlgebra<Q>& a) {
  Report rep;
  rep.command = "quantale collapse";
  const BoolAlgebra b = collapse(a);
  const bool frob = verify_axioms(b, 0.0).is_frobenius();
  rep.add("frobenius_after_collapse", frob, frob ? 0.0 : 1.0);
  rep.outputs["algebra"] = algebra_to_json(b);
  return rep;
}

template <QuantaleModel Q>
Report cmd_quantale_groupoid(const FrobeniusAlgebra<Q>& a) {
  Report rep;
  rep.command = "quantale groupoid";
  const AxiomReport r = verify_axioms(a, 0.0);
  rep.add("frobenius", r.is_frobenius(), std::max({r.associative.residual, r.unital.residual,
                                                   r.frobenius_law.residual, r.frobenius_snake.residual}));
  try {
    const Groupoid g = q_algebra_groupoid(a);
    rep.add("groupoid", true, 0.0);
    describe_groupoid(rep, g);
  } catch (const NotAGroupoidAlgebra& e) {
    rep.add("groupoid", false, std::nullopt, json{{"axiom", e.axiom()}, {"detail", e.what()}});
  } catch (const MissingNormaliser& e) {
    rep.add("groupoid", false, std::nullopt, json{{"axiom", "normaliser"}, {"detail", e.what()}});
  }
  return rep;
}

template <QuantaleModel Q>
Report cmd_quantale_enumerate(std::size_t n, const std::vector<typename Q::value_type>& grid) {
  Report rep;
  rep.command = "quantale enumerate";
  const auto found = enumerate_q_algebras<Q>(n, grid);
  std::size_t groupoids = 0;
  std::set<std::vector<int>> classes;
  for (const auto& a : found) {
    try {
      classes.insert(canonical_form(q_algebra_groupoid(a)));
      ++groupoids;
    } catch (const NotAGroupoidAlgebra&) {
    }
  }
  rep.add("all_yield_groupoids", groupoids == found.size(),
          static_cast<double>(found.size() - groupoids));
  rep.outputs["model"] = std::string(Q::name);
  rep.outputs["carrier_size"] = n;
  rep.outputs["normalisable_algebras"] = found.size();
  rep.outputs["groupoid_classes"] = classes.size();
  return rep;
}

template <QuantaleModel Q>
Report cmd_quantale_counterexample(const std::vector<typename Q::value_type>& grid, std::size_t max_dim) {
  Report rep;
  rep.command = "quantale counterexample";
  const auto c = find_collapse_counterexample<Q>(grid, max_dim);
  rep.outputs["model"] = std::string(Q::name);
  rep.outputs["cancellative"] = Q::cancellative;
  if (c) {
    rep.outputs["counterexample"] = {{"s", matrix_to_json<Q>(c->s)},
                                     {"r", matrix_to_json<Q>(c->r)},
                                     {"collapse_of_composite", matrix_to_json<BooleanModel>(c->collapsed_composite)},
                                     {"composite_of_collapses", matrix_to_json<BooleanModel>(c->composite_of_collapses)}};
  }
  // Informational: functoriality is only promised for cancellative quantales.
  rep.add("functorial_on_grid", !c.has_value(), c ? 1.0 : 0.0, nullptr, Q::cancellative);
  return rep;
}

}  // namespace cpstar::cli
