#include <CLI11.hpp>

#include "commands.hpp"

using namespace cpstar;
using namespace cpstar::cli;

namespace {

struct Common {
  double tol = Tolerance{}.eq;
  double eig = Tolerance{}.eig;
  bool json_out = false;
  std::uint64_t seed = 0;
  Tolerance tolerance() const { return {tol, eig}; }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--tol", c.tol, "equality tolerance")->check(CLI::PositiveNumber);
  app->add_option("--eig-tol", c.eig, "eigenvalue threshold for PSD tests")->check(CLI::PositiveNumber);
  app->add_flag("--json", c.json_out, "print a single JSON report on stdout");
  app->add_option("--seed", c.seed, "seed for randomized internals");
}

// Loads from a path ("-" for stdin) or a preset; records the input hash.
struct Source {
  std::string path;
  std::string preset;

  std::pair<std::string, std::string> load(Report& rep) const {
    if (!preset.empty() && !path.empty()) throw InputError("give either a path or --preset, not both");
    if (!preset.empty()) {
      rep.add_input("preset:" + preset, preset);
      return {preset, ""};
    }
    if (path.empty()) throw InputError("no input: give a path, - for stdin, or --preset");
    std::string text = read_source(path);
    rep.add_input(path, text);
    return {"", std::move(text)};
  }
};

// An algebra document may be wrapped in a report that carries outputs.algebra.
json unwrap_algebra(json j) {
  if (j.is_object() && j.contains("outputs") && j["outputs"].contains("algebra")) return j["outputs"]["algebra"];
  if (j.is_object() && j.contains("algebra") && !j.contains("mult")) return j["algebra"];
  return j;
}

json unwrap_groupoid(json j) {
  if (j.is_object() && j.contains("outputs") && j["outputs"].contains("groupoid")) return j["outputs"]["groupoid"];
  if (j.is_object() && j.contains("groupoid") && !j.contains("comp")) return j["groupoid"];
  return j;
}

AnyAlgebra load_algebra(const Source& src, Report& rep, const std::string& model) {
  const auto [preset, text] = src.load(rep);
  if (!preset.empty()) return algebra_preset(preset, model);
  return algebra_from_json(unwrap_algebra(parse_json(text, src.path)));
}

template <class T>
std::vector<T> parse_grid(const std::string& text) {
  std::vector<T> out;
  for (const auto& s : split(text, ',')) {
    if (s == "inf") {
      out.push_back(static_cast<T>(std::numeric_limits<double>::infinity()));
    } else {
      out.push_back(static_cast<T>(parse_double(s, "grid")));
    }
  }
  if (out.empty()) throw InputError("grid must not be empty");
  return out;
}

int finish(Report rep, const Report& inputs_from, const Common& c) {
  rep.inputs = inputs_from.inputs;
  rep.tol = c.tolerance();
  rep.seed = c.seed;
  if (c.json_out) {
    std::cout << report_to_json(rep).dump() << "\n";
  } else {
    print_human(rep, std::cout);
  }
  return rep.ok() ? 0 : 1;
}

// Runs fn for the quantale model named by model.
template <class Fn>
Report with_quantale(const std::string& model, Fn&& fn) {
  if (model == "boolean") return fn(BooleanModel{});
  if (model == "unit-interval" || model == UnitIntervalQuantale::name) return fn(UnitIntervalQuantale{});
  if (model == "extended-reals" || model == ExtendedRealQuantale::name) return fn(ExtendedRealQuantale{});
  if (model == "lukasiewicz3" || model == LukasiewiczQuantale::name) return fn(LukasiewiczQuantale{});
  throw InputError("unknown quantale " + model);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for CP*-categories over finite-dimensional models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common common;

  // verify
  Source verify_src;
  std::string verify_model;
  auto* verify = app.add_subcommand("verify", "check the Frobenius axioms and find a normaliser");
  verify->add_option("path", verify_src.path, "algebra document (- for stdin)");
  verify->add_option("--preset", verify_src.preset, "pants:d, basis:d, direct-sum:n1,n2,..., z2, cyclic:n, discrete:n, indiscrete:n, trivial");
  verify->add_option("--model", verify_model, "scalar model for presets");
  add_common(verify, common);

  // decompose
  Source decompose_src;
  auto* decompose = app.add_subcommand("decompose", "block decomposition of a complex algebra");
  decompose->add_option("path", decompose_src.path, "algebra document (- for stdin)");
  decompose->add_option("--preset", decompose_src.preset, "complex algebra preset");
  add_common(decompose, common);

  // check-cp
  Source cp_src;
  std::string cp_dom, cp_cod;
  auto* check_cp = app.add_subcommand("check-cp", "decide the CP*-condition for a morphism");
  check_cp->add_option("path", cp_src.path, "morphism document (- for stdin)");
  check_cp->add_option("--preset", cp_src.preset,
                       "identity:<algebra>, transpose:d, trace:d, unit:d, mult:d, normaliser:d, depolarizing:p, "
                       "stochastic:r0c0,r0c1;r1c0,..., reshuffle:a,b");
  check_cp->add_option("--dom", cp_dom, "domain algebra (path or preset), overrides the document");
  check_cp->add_option("--cod", cp_cod, "codomain algebra (path or preset), overrides the document");
  add_common(check_cp, common);

  // groupoid
  auto* groupoid = app.add_subcommand("groupoid", "groupoids as boolean Frobenius algebras");
  groupoid->require_subcommand(1);
  Source to_alg_src;
  auto* to_alg = groupoid->add_subcommand("to-algebra", "groupoid table to boolean algebra");
  to_alg->add_option("path", to_alg_src.path, "groupoid document (- for stdin)");
  to_alg->add_option("--preset", to_alg_src.preset, "z2, cyclic:n, discrete:n, indiscrete:n");
  add_common(to_alg, common);
  Source from_alg_src;
  auto* from_alg = groupoid->add_subcommand("from-algebra", "boolean algebra to groupoid table");
  from_alg->add_option("path", from_alg_src.path, "algebra document or report (- or omitted for stdin)");
  from_alg->add_option("--preset", from_alg_src.preset, "boolean algebra preset");
  add_common(from_alg, common);
  std::size_t enumerate_n = 0;
  bool allow_four = false;
  auto* enumerate = groupoid->add_subcommand("enumerate", "enumerate boolean Frobenius structures and groupoid tables");
  enumerate->add_option("n", enumerate_n, "carrier size")->required();
  enumerate->add_flag("--long", allow_four, "allow carrier size 4 (tens of seconds)");
  add_common(enumerate, common);
  std::size_t indiscrete_n = 0;
  auto* indiscrete_cmd = groupoid->add_subcommand("indiscrete", "indiscrete groupoid on n objects");
  indiscrete_cmd->add_option("n", indiscrete_n, "number of objects")->required()->check(CLI::Range(1, 4));
  add_common(indiscrete_cmd, common);

  // quantale
  auto* quantale = app.add_subcommand("quantale", "matrices over quantales");
  quantale->require_subcommand(1);
  Source collapse_src;
  std::string q_model;
  auto* collapse_cmd = quantale->add_subcommand("collapse", "collapse an algebra over a quantale to Rel");
  collapse_cmd->add_option("path", collapse_src.path, "algebra document (- for stdin)");
  collapse_cmd->add_option("--preset", collapse_src.preset, "groupoid preset");
  collapse_cmd->add_option("--model", q_model, "quantale for presets");
  add_common(collapse_cmd, common);
  Source qgroupoid_src;
  auto* qgroupoid = quantale->add_subcommand("groupoid", "groupoid induced by a normalisable algebra over a quantale");
  qgroupoid->add_option("path", qgroupoid_src.path, "algebra document (- for stdin)");
  qgroupoid->add_option("--preset", qgroupoid_src.preset, "groupoid preset");
  qgroupoid->add_option("--model", q_model, "quantale for presets");
  add_common(qgroupoid, common);
  std::size_t qenum_n = 1;
  std::string grid = "0,0.5,1";
  std::string enum_model = "unit-interval";
  auto* qenum = quantale->add_subcommand("enumerate", "normalisable algebras with entries from a grid");
  qenum->add_option("n", qenum_n, "carrier size (1 or 2)")->required();
  qenum->add_option("--model", enum_model, "boolean, unit-interval, extended-reals, lukasiewicz3");
  qenum->add_option("--grid", grid, "comma separated entry values");
  add_common(qenum, common);
  std::size_t max_dim = 2;
  std::string cex_model = "lukasiewicz3";
  auto* cex = quantale->add_subcommand("counterexample", "search for a failure of collapse functoriality");
  cex->add_option("--model", cex_model, "boolean, unit-interval, extended-reals, lukasiewicz3");
  cex->add_option("--grid", grid, "comma separated entry values");
  cex->add_option("--max-dim", max_dim, "largest matrix side (at most 2)");
  add_common(cex, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Report in;
    if (verify->parsed()) {
      const AnyAlgebra a = load_algebra(verify_src, in, verify_model);
      return finish(cmd_verify(a, common.tolerance()), in, common);
    }
    if (decompose->parsed()) {
      const AnyAlgebra a = load_algebra(decompose_src, in, "complex");
      if (!std::holds_alternative<ComplexAlgebra>(a)) throw InputError("decompose needs a complex algebra");
      return finish(cmd_decompose(std::get<ComplexAlgebra>(a), common.tolerance(), common.seed), in, common);
    }
    if (check_cp->parsed()) {
      const auto [preset, text] = cp_src.load(in);
      std::optional<CPStarMorphism> f;
      if (!preset.empty()) {
        f = morphism_preset(preset);
        if (!cp_dom.empty() || !cp_cod.empty()) {
          const ComplexAlgebra dom = cp_dom.empty() ? f->dom : ensure_normaliser(complex_algebra_ref(cp_dom), common.tol);
          const ComplexAlgebra cod = cp_cod.empty() ? f->cod : ensure_normaliser(complex_algebra_ref(cp_cod), common.tol);
          f = CPStarMorphism(dom, cod, f->map);
        }
      } else {
        json doc = parse_json(text, cp_src.path);
        if (!cp_dom.empty()) doc["dom"] = cp_dom;
        if (!cp_cod.empty()) doc["cod"] = cp_cod;
        f = morphism_from_json(doc, common.tol);
      }
      return finish(cmd_check_cp(*f, common.tolerance(), common.seed), in, common);
    }
    if (to_alg->parsed()) {
      const auto [preset, text] = to_alg_src.load(in);
      const Groupoid g = preset.empty() ? groupoid_from_json(unwrap_groupoid(parse_json(text, to_alg_src.path)))
                                        : groupoid_preset(preset);
      return finish(cmd_groupoid_to_algebra(g), in, common);
    }
    if (from_alg->parsed()) {
      Source src = from_alg_src;
      if (src.path.empty() && src.preset.empty()) src.path = "-";
      const AnyAlgebra a = load_algebra(src, in, "boolean");
      if (!std::holds_alternative<BoolAlgebra>(a)) throw InputError("from-algebra needs a boolean algebra");
      return finish(cmd_groupoid_from_algebra(std::get<BoolAlgebra>(a)), in, common);
    }
    if (enumerate->parsed()) {
      if (enumerate_n == 0 || enumerate_n > 4) throw InputError("carrier size must be between 1 and 4");
      if (enumerate_n == 4 && !allow_four) throw InputError("carrier size 4 takes a while; pass --long");
      in.add_input("n", std::to_string(enumerate_n));
      return finish(cmd_groupoid_enumerate(enumerate_n), in, common);
    }
    if (indiscrete_cmd->parsed()) {
      in.add_input("n", std::to_string(indiscrete_n));
      return finish(cmd_groupoid_indiscrete(indiscrete_n), in, common);
    }
    if (collapse_cmd->parsed() || qgroupoid->parsed()) {
      const bool is_collapse = collapse_cmd->parsed();
      const Source& src = is_collapse ? collapse_src : qgroupoid_src;
      const std::string model = q_model.empty() ? "" : (q_model.rfind("quantale:", 0) == 0 || q_model == "boolean"
                                                            ? q_model
                                                            : "quantale:" + q_model);
      const AnyAlgebra a = load_algebra(src, in, model);
      const Report rep = std::visit(
          [&](const auto& alg) -> Report {
            using M = typename std::decay_t<decltype(alg)>::model_type;
            if constexpr (QuantaleModel<M>) {
              return is_collapse ? cmd_quantale_collapse(alg) : cmd_quantale_groupoid(alg);
            } else {
              throw InputError("quantale commands need a boolean or quantale algebra");
            }
          },
          a);
      return finish(rep, in, common);
    }
    if (qenum->parsed()) {
      if (qenum_n == 0 || qenum_n > 2) throw InputError("carrier size must be 1 or 2");
      in.add_input("grid", grid);
      const Report rep = with_quantale(enum_model, [&](auto model) {
        using Q = decltype(model);
        return cmd_quantale_enumerate<Q>(qenum_n, parse_grid<typename Q::value_type>(grid));
      });
      return finish(rep, in, common);
    }
    if (cex->parsed()) {
      if (max_dim == 0 || max_dim > 2) throw InputError("max-dim must be 1 or 2");
      in.add_input("grid", grid);
      const Report rep = with_quantale(cex_model, [&](auto model) {
        using Q = decltype(model);
        return cmd_quantale_counterexample<Q>(parse_grid<typename Q::value_type>(grid), max_dim);
      });
      return finish(rep, in, common);
    }
  } catch (const InputError& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 2;
  } catch (const ShapeMismatch& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 2;
  } catch (const ObjectMismatch& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 2;
  } catch (const InvalidGroupoid& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 2;
  } catch (const NotABasis& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 2;
  } catch (const MissingNormaliser& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 2;
  } catch (const NotAGroupoidAlgebra& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "cpstar: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
