#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "cpstar/category.hpp"
#include "cpstar/groupoid.hpp"
#include "cpstar/quantale.hpp"

namespace cpstar::cli {

using nlohmann::json;

// Bad input: exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

// Reads a file, or standard input for "-".
inline std::string read_source(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

// ---- scalar entries ----

template <ScalarModel M>
typename M::value_type entry_from_json(const json& j) {
  using V = typename M::value_type;
  if constexpr (is_complex_model<M>) {
    double re = 0.0, im = 0.0;
    if (j.is_number()) {
      re = j.get<double>();
    } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      re = j[0].get<double>();
      im = j[1].get<double>();
    } else {
      throw InputError("complex entry must be a number or [re, im], got " + j.dump());
    }
    if (!std::isfinite(re) || !std::isfinite(im)) throw InputError("complex entries must be finite");
    return V(re, im);
  } else if constexpr (std::same_as<M, BooleanModel>) {
    if (j.is_boolean()) return j.get<bool>() ? 1 : 0;
    if (j.is_number_integer() && (j.get<int>() == 0 || j.get<int>() == 1)) return static_cast<V>(j.get<int>());
    throw InputError("boolean entry must be 0, 1, true or false, got " + j.dump());
  } else {
    double v = 0.0;
    if (j.is_string() && j.get<std::string>() == "inf") {
      v = std::numeric_limits<double>::infinity();
    } else if (j.is_number()) {
      v = j.get<double>();
    } else {
      throw InputError(std::string(M::name) + " entry must be a number, got " + j.dump());
    }
    if (std::isnan(v) || v < 0.0) throw InputError(std::string(M::name) + " entries must be nonnegative");
    if constexpr (std::same_as<M, UnitIntervalQuantale>) {
      if (v > 1.0) throw InputError("unit-interval entries must lie in [0,1]");
    } else if constexpr (std::same_as<M, LukasiewiczQuantale>) {
      if (v != 0.0 && v != 0.5 && v != 1.0) throw InputError("lukasiewicz3 entries must be 0, 0.5 or 1");
    }
    return v;
  }
}

template <ScalarModel M>
json entry_to_json(typename M::value_type v) {
  if constexpr (is_complex_model<M>) {
    return json::array({v.real(), v.imag()});
  } else if constexpr (std::same_as<M, BooleanModel>) {
    return static_cast<int>(v);
  } else {
    if (std::isinf(v)) return "inf";
    return v;
  }
}

// rows x cols table, one JSON array per row.
template <ScalarModel M>
Tensor<M> matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array() || j.size() != rows) {
    throw InputError(what + ": expected " + std::to_string(rows) + " rows");
  }
  Tensor<M> t({rows}, {cols});
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw InputError(what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) t(r, c) = entry_from_json<M>(j[r][c]);
  }
  return t;
}

template <ScalarModel M>
json matrix_to_json(const Tensor<M>& t) {
  json out = json::array();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(entry_to_json<M>(t(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json real_matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c).real());
    out.push_back(std::move(row));
  }
  return out;
}

// ---- algebras ----

using AnyAlgebra = std::variant<ComplexAlgebra, BoolAlgebra, FrobeniusAlgebra<UnitIntervalQuantale>,
                                FrobeniusAlgebra<ExtendedRealQuantale>, FrobeniusAlgebra<LukasiewiczQuantale>>;

template <ScalarModel M>
FrobeniusAlgebra<M> algebra_from_json_as(const json& j) {
  if (!j.contains("dim") || !j["dim"].is_number_unsigned()) throw InputError("algebra document needs a dim");
  const auto d = j["dim"].get<std::size_t>();
  if (d == 0 || d > 64) throw InputError("algebra dim must be between 1 and 64");
  if (!j.contains("mult") || !j.contains("unit")) throw InputError("algebra document needs mult and unit");
  const Tensor<M> mult = matrix_from_json<M>(j["mult"], d, d * d, "mult");
  const json& u = j["unit"];
  if (!u.is_array() || u.size() != d) throw InputError("unit: expected " + std::to_string(d) + " entries");
  Tensor<M> unit({d}, {});
  for (std::size_t i = 0; i < d; ++i) unit(i, 0) = entry_from_json<M>(u[i]);
  std::optional<Tensor<M>> z;
  if (j.contains("normaliser") && !j["normaliser"].is_null()) z = matrix_from_json<M>(j["normaliser"], d, d, "normaliser");
  return FrobeniusAlgebra<M>(reshape(mult, {d}, {d, d}), unit, z);
}

inline AnyAlgebra algebra_from_json(const json& j) {
  if (!j.is_object()) throw InputError("algebra document must be an object");
  const std::string model = j.value("model", "complex");
  if (model == ComplexModel::name) return algebra_from_json_as<ComplexModel>(j);
  if (model == BooleanModel::name) return algebra_from_json_as<BooleanModel>(j);
  if (model == UnitIntervalQuantale::name) return algebra_from_json_as<UnitIntervalQuantale>(j);
  if (model == ExtendedRealQuantale::name) return algebra_from_json_as<ExtendedRealQuantale>(j);
  if (model == LukasiewiczQuantale::name) return algebra_from_json_as<LukasiewiczQuantale>(j);
  throw InputError("unknown model " + model);
}

template <ScalarModel M>
json algebra_to_json(const FrobeniusAlgebra<M>& a, json metadata = json::object()) {
  const std::size_t d = a.dim();
  json out{{"model", std::string(M::name)}, {"dim", d}};
  out["mult"] = matrix_to_json<M>(reshape(a.mult(), {d}, {d * d}));
  json unit = json::array();
  for (std::size_t i = 0; i < d; ++i) unit.push_back(entry_to_json<M>(a.unit()(i, 0)));
  out["unit"] = unit;
  if (a.normaliser()) out["normaliser"] = matrix_to_json<M>(*a.normaliser());
  if (!metadata.empty()) out["metadata"] = std::move(metadata);
  return out;
}

inline json algebra_to_json(const AnyAlgebra& a) {
  return std::visit([](const auto& x) { return algebra_to_json(x); }, a);
}

template <ScalarModel M>
Tensor<M> lift(const BoolTensor& t) {
  Tensor<M> out(t.row_legs(), t.col_legs());
  for (std::size_t i = 0; i < t.size(); ++i) out.entries()[i] = t.entries()[i] ? M::one() : M::zero();
  return out;
}

template <ScalarModel M>
FrobeniusAlgebra<M> lift(const BoolAlgebra& a) {
  std::optional<Tensor<M>> z;
  if (a.normaliser()) z = lift<M>(*a.normaliser());
  return FrobeniusAlgebra<M>(lift<M>(a.mult()), lift<M>(a.unit()), z);
}

// ---- groupoids ----

inline Groupoid groupoid_from_json(const json& j) {
  if (!j.is_object() || !j.contains("morphisms") || !j.contains("comp")) {
    throw InputError("groupoid document needs morphisms and comp");
  }
  const auto n = j["morphisms"].get<std::size_t>();
  if (n == 0 || n > 64) throw InputError("groupoid needs between 1 and 64 morphisms");
  const json& c = j["comp"];
  if (!c.is_array() || c.size() != n) throw InputError("comp must have one row per morphism");
  std::vector<std::optional<std::size_t>> comp(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    if (!c[x].is_array() || c[x].size() != n) throw InputError("comp rows must have one entry per morphism");
    for (std::size_t y = 0; y < n; ++y) {
      if (c[x][y].is_null()) continue;
      if (!c[x][y].is_number_unsigned()) throw InputError("comp entries must be morphism indices or null");
      comp[x * n + y] = c[x][y].get<std::size_t>();
    }
  }
  try {
    return groupoid_from_table(n, comp);
  } catch (const InvalidGroupoid& e) {
    throw InputError(e.what());
  }
}

inline json groupoid_to_json(const Groupoid& g) {
  const std::size_t n = g.size();
  json comp = json::array();
  for (std::size_t x = 0; x < n; ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < n; ++y) {
      const auto c = g.compose(x, y);
      row.push_back(c ? json(*c) : json(nullptr));
    }
    comp.push_back(std::move(row));
  }
  return {{"morphisms", n}, {"objects", g.object_count}, {"comp", comp}, {"dom", g.dom},
          {"cod", g.cod},   {"ids", g.ids},            {"inv", g.inv}};
}

// ---- presets ----

inline std::size_t parse_size(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(what + ": expected a nonnegative integer, got '" + s + "'");
  }
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(what + ": expected a number, got '" + s + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::pair<std::string, std::string> preset_parts(const std::string& preset) {
  const auto colon = preset.find(':');
  if (colon == std::string::npos) return {preset, ""};
  return {preset.substr(0, colon), preset.substr(colon + 1)};
}

inline Groupoid groupoid_preset(const std::string& preset) {
  const auto [kind, arg] = preset_parts(preset);
  auto size = [&, a = arg](std::size_t fallback) {
    const std::size_t n = a.empty() ? fallback : parse_size(a, preset);
    if (n == 0 || n > 16) throw InputError(preset + ": size must be between 1 and 16");
    return n;
  };
  if (kind == "z2") return cyclic(2);
  if (kind == "cyclic") return cyclic(size(2));
  if (kind == "discrete") return discrete(size(1));
  if (kind == "indiscrete") {
    const std::size_t n = size(2);
    if (n > 4) throw InputError("indiscrete preset is limited to 4 objects");
    return indiscrete(n);
  }
  throw InputError("unknown groupoid preset " + preset);
}

inline bool is_groupoid_preset(const std::string& preset) {
  const auto kind = preset_parts(preset).first;
  return kind == "z2" || kind == "cyclic" || kind == "discrete" || kind == "indiscrete";
}

inline ComplexAlgebra complex_preset(const std::string& preset) {
  const auto [kind, arg] = preset_parts(preset);
  if (kind == "trivial") return trivial_algebra<ComplexModel>();
  if (kind == "pants") {
    const std::size_t d = parse_size(arg, preset);
    if (d == 0 || d > 6) throw InputError("pants preset needs 1 <= d <= 6");
    return pair_of_pants<ComplexModel>(d);
  }
  if (kind == "basis") {
    const std::size_t d = parse_size(arg, preset);
    if (d == 0 || d > 36) throw InputError("basis preset needs 1 <= d <= 36");
    return from_orthogonal_basis(Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }
  if (kind == "direct-sum") {
    std::vector<ComplexAlgebra> parts;
    for (const auto& s : split(arg, ',')) {
      const std::size_t n = parse_size(s, preset);
      if (n == 0 || n > 6) throw InputError("direct-sum blocks need 1 <= n <= 6");
      parts.push_back(pair_of_pants<ComplexModel>(n));
    }
    if (parts.empty()) throw InputError("direct-sum preset needs a block list");
    return direct_sum(parts);
  }
  throw InputError("unknown complex algebra preset " + preset);
}

// Algebra presets. Groupoid presets default to the boolean model; model
// selects another scalar model where the preset makes sense there.
inline AnyAlgebra algebra_preset(const std::string& preset, const std::string& model = "") {
  const std::string m = model.empty() ? (is_groupoid_preset(preset) ? "boolean" : "complex") : model;
  if (m == ComplexModel::name) {
    if (is_groupoid_preset(preset)) return lift<ComplexModel>(groupoid_to_algebra(groupoid_preset(preset)));
    return complex_preset(preset);
  }
  BoolAlgebra b = [&] {
    if (is_groupoid_preset(preset)) return groupoid_to_algebra(groupoid_preset(preset));
    const auto [kind, arg] = preset_parts(preset);
    if (kind == "pants") {
      const std::size_t d = parse_size(arg, preset);
      if (d == 0 || d > 4) throw InputError("pants preset needs 1 <= d <= 4 outside the complex model");
      return pair_of_pants<BooleanModel>(d);
    }
    if (kind == "trivial") return trivial_algebra<BooleanModel>();
    throw InputError("preset " + preset + " is only available in the complex model");
  }();
  if (m == BooleanModel::name) return b;
  if (m == UnitIntervalQuantale::name) return lift<UnitIntervalQuantale>(b);
  if (m == ExtendedRealQuantale::name) return lift<ExtendedRealQuantale>(b);
  if (m == LukasiewiczQuantale::name) return lift<LukasiewiczQuantale>(b);
  throw InputError("unknown model " + m);
}

// A reference to a complex algebra: inline document, file path, or preset name.
inline ComplexAlgebra complex_algebra_ref(const json& ref) {
  if (ref.is_object()) {
    AnyAlgebra a = algebra_from_json(ref);
    if (!std::holds_alternative<ComplexAlgebra>(a)) throw InputError("morphism objects must use the complex model");
    return std::get<ComplexAlgebra>(a);
  }
  if (!ref.is_string()) throw InputError("algebra reference must be a document, a path or a preset");
  const std::string s = ref.get<std::string>();
  std::ifstream probe(s);
  if (probe) return complex_algebra_ref(parse_json(read_source(s), s));
  AnyAlgebra a = algebra_preset(s, "complex");
  return std::get<ComplexAlgebra>(a);
}

inline ComplexAlgebra ensure_normaliser(const ComplexAlgebra& a, double tol) {
  if (a.has_normaliser()) return a;
  try {
    return with_solved_normaliser(a, tol);
  } catch (const NoNormaliser& e) {
    throw InputError(std::string("object has no normaliser: ") + e.what());
  } catch (const NotAnAlgebra& e) {
    throw InputError(std::string("object is not a Frobenius algebra: ") + e.what());
  }
}

inline CPStarMorphism morphism_from_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("cod") || !j.contains("map")) {
    throw InputError("morphism document needs dom, cod and map");
  }
  const ComplexAlgebra dom = ensure_normaliser(complex_algebra_ref(j["dom"]), tol);
  const ComplexAlgebra cod = ensure_normaliser(complex_algebra_ref(j["cod"]), tol);
  return {dom, cod, matrix_from_json<ComplexModel>(j["map"], cod.dim(), dom.dim(), "map")};
}

inline json morphism_to_json(const CPStarMorphism& f) {
  return {{"dom", algebra_to_json(f.dom)}, {"cod", algebra_to_json(f.cod)}, {"map", matrix_to_json<ComplexModel>(f.map)}};
}

inline Matrix parse_rows(const std::string& text, const std::string& what) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : split(text, ';')) {
    std::vector<double> row;
    for (const auto& v : split(r, ',')) row.push_back(parse_double(v, what));
    if (!rows.empty() && row.size() != rows.front().size()) throw InputError(what + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw InputError(what + ": empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return m;
}

// Morphism presets.
inline CPStarMorphism morphism_preset(const std::string& preset) {
  const auto [kind, arg] = preset_parts(preset);
  auto side = [&, a = arg](std::size_t fallback) {
    const std::size_t d = a.empty() ? fallback : parse_size(a, preset);
    if (d == 0 || d > 6) throw InputError(preset + ": size must be between 1 and 6");
    return d;
  };
  if (kind == "identity") {
    if (arg.empty()) throw InputError("identity preset needs an algebra, e.g. identity:pants:2");
    return identity_morphism(complex_preset(arg));
  }
  if (kind == "transpose") return transpose_map(side(2));
  if (kind == "trace") return trace_map(side(2));
  if (kind == "unit") return unital_embedding(side(2));
  if (kind == "mult") return multiplication_morphism(pair_of_pants<ComplexModel>(side(2)));
  if (kind == "normaliser") return normaliser_morphism(pair_of_pants<ComplexModel>(side(2)));
  if (kind == "depolarizing") {
    // x -> (1 - p) x + p Tr(x) id / 2 on 2x2 matrices
    const double p = arg.empty() ? 1.0 : parse_double(arg, preset);
    const CPStarMorphism full = depolarizing(2);
    return {full.dom, full.cod, sum(scaled(identity<ComplexModel>(4), Complex(1.0 - p)), scaled(full.map, Complex(p)))};
  }
  if (kind == "stochastic") return channel_from_stochastic(parse_rows(arg, preset));
  if (kind == "reshuffle") {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw InputError("reshuffle preset needs two sizes, e.g. reshuffle:2,3");
    const std::size_t a = parse_size(parts[0], preset), b = parse_size(parts[1], preset);
    if (a == 0 || b == 0 || a * b > 6) throw InputError("reshuffle sizes must be positive with product at most 6");
    return reshuffle(a, b);
  }
  throw InputError("unknown morphism preset " + preset);
}

}  // namespace cpstar::cli
