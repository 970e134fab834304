#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cpstar/commands.hpp"

using namespace cpstar;
using namespace cpstar::cli;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded so stdout must stand alone.
CliRun run(const std::string& args) {
  const std::string cmd = std::string("'") + CPSTAR_CLI_PATH + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args, int expected_exit) {
  const CliRun r = run(args + " --json");
  EXPECT_EQ(r.exit_code, expected_exit) << args << "\n" << r.out;
  return json::parse(r.out);
}

const json& result(const json& report, const std::string& name) {
  for (const auto& r : report["results"])
    if (r["name"] == name) return r;
  throw std::runtime_error("no result " + name);
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("cpstar_cli_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Verify, PantsPreset) {
  const json rep = run_json("verify --preset pants:2", 0);
  EXPECT_TRUE(rep["pass"]);
  for (const char* name : {"associative", "unital", "frobenius_law", "frobenius_snake", "normaliser"})
    EXPECT_TRUE(result(rep, name)["pass"]) << name;
  EXPECT_NEAR(rep["outputs"]["normaliser_scale"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(rep["version"], kVersion);
  EXPECT_EQ(rep["seed"], 0);
  EXPECT_EQ(rep["inputs"].size(), 1u);
}

TEST(Verify, SolvesMissingNormaliser) {
  json doc = run_json("groupoid indiscrete 2", 0)["outputs"]["algebra"];
  doc["model"] = "complex";
  doc.erase("normaliser");
  const json rep = run_json("verify " + write_temp("pants2.json", doc.dump()), 0);
  EXPECT_TRUE(result(rep, "normaliser")["pass"]);
  EXPECT_NEAR(rep["outputs"]["normaliser_scale"].get<double>(), 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(Verify, CorruptedMultiplicationFails) {
  json doc = run_json("groupoid indiscrete 2", 0)["outputs"]["algebra"];
  doc["model"] = "complex";
  doc.erase("normaliser");
  doc["mult"][0][0] = json::array({1.0, 0.5});
  const json rep = run_json("verify " + write_temp("corrupt.json", doc.dump()), 1);
  EXPECT_FALSE(rep["pass"]);
  const json& law = result(rep, "frobenius_law");
  EXPECT_FALSE(law["pass"]);
  EXPECT_GT(law["residual"].get<double>(), 1e-3);
}

TEST(Verify, ReadsStdin) {
  const CliRun r = run("groupoid to-algebra --preset z2 --json | '" + std::string(CPSTAR_CLI_PATH) + "' verify - --json");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(json::parse(r.out)["pass"]);
}

TEST(Decompose, DirectSum) {
  const json rep = run_json("decompose --preset direct-sum:1,2", 0);
  EXPECT_EQ(rep["outputs"]["dim"], 5);
  EXPECT_EQ(rep["outputs"]["block_sizes"], json::array({2, 1}));
}

TEST(CheckCp, Identity) {
  const json rep = run_json("check-cp --preset identity:pants:2", 0);
  EXPECT_TRUE(result(rep, "cpstar")["pass"]);
  EXPECT_EQ(rep["outputs"]["kraus"]["ancilla_dim"], 1);
}

TEST(CheckCp, TransposeFailsWithCertificate) {
  const json rep = run_json("check-cp --preset transpose:2", 1);
  const json& cp = result(rep, "cpstar");
  EXPECT_FALSE(cp["pass"]);
  EXPECT_NEAR(cp["certificate"]["min_eigenvalue"].get<double>(), -1.0, 1e-9);
}

TEST(CheckCp, StochasticMatrix) {
  const json rep = run_json("check-cp --preset 'stochastic:0.3,0.6;0.7,0.4'", 0);
  EXPECT_TRUE(result(rep, "classical_channel")["pass"]);
  const auto sums = rep["outputs"]["column_sums"].get<std::vector<double>>();
  ASSERT_EQ(sums.size(), 2u);
  for (double s : sums) EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(rep["outputs"]["stochastic_matrix"][1][0].get<double>(), 0.7, 1e-12);
}

TEST(CheckCp, MorphismDocument) {
  const json doc{{"dom", "basis:2"}, {"cod", "basis:2"}, {"map", {{0, 1}, {1, 0}}}};
  const json rep = run_json("check-cp " + write_temp("swap.json", doc.dump()), 0);
  EXPECT_TRUE(result(rep, "cpstar")["pass"]);
}

TEST(CheckCp, DimensionMismatchIsInputError) {
  const json doc{{"dom", "basis:2"}, {"cod", "pants:2"}, {"map", {{0, 1}, {1, 0}}}};
  EXPECT_EQ(run("check-cp " + write_temp("bad.json", doc.dump())).exit_code, 2);
}

TEST(Groupoid, EnumerateMatchesIndependentCount) {
  const json rep = run_json("groupoid enumerate 2", 0);
  EXPECT_EQ(rep["outputs"]["frobenius_structures"], 3);
  EXPECT_EQ(rep["outputs"]["groupoid_tables"], 3);
  EXPECT_EQ(rep["outputs"]["classes"].size(), 2u);
}

TEST(Groupoid, IndiscreteRoundTrip) {
  const json first = run_json("groupoid indiscrete 3", 0);
  const CliRun r = run("groupoid indiscrete 3 --json | '" + std::string(CPSTAR_CLI_PATH) + "' groupoid from-algebra --json");
  ASSERT_EQ(r.exit_code, 0);
  const json second = json::parse(r.out);
  EXPECT_EQ(second["outputs"]["canonical_form"], first["outputs"]["canonical_form"]);
}

TEST(Groupoid, Z2ToAlgebra) {
  const json rep = run_json("groupoid to-algebra --preset z2", 0);
  const json& alg = rep["outputs"]["algebra"];
  EXPECT_EQ(alg["model"], "boolean");
  ASSERT_EQ(alg["mult"].size(), 2u);
  EXPECT_EQ(alg["mult"][0], json::array({1, 0, 0, 1}));
  EXPECT_EQ(alg["mult"][1], json::array({0, 1, 1, 0}));
  EXPECT_EQ(alg["unit"], json::array({1, 0}));
}

TEST(Groupoid, InvalidTableIsInputError) {
  const json doc{{"morphisms", 2}, {"comp", {{0, 5}, {1, 0}}}};
  EXPECT_EQ(run("groupoid to-algebra " + write_temp("bad_groupoid.json", doc.dump())).exit_code, 2);
}

TEST(Groupoid, NonGroupoidAlgebraFails) {
  // The monoid {1, x} with x x = x is not Frobenius.
  const json doc{{"model", "boolean"}, {"dim", 2}, {"mult", {{1, 0, 0, 0}, {0, 1, 1, 1}}}, {"unit", {1, 0}}};
  EXPECT_EQ(run("groupoid from-algebra " + write_temp("monoid.json", doc.dump())).exit_code, 1);
}

TEST(Quantale, EnumerateAndCounterexample) {
  const json e = run_json("quantale enumerate 2", 0);
  EXPECT_TRUE(result(e, "all_yield_groupoids")["pass"]);
  const json c = run_json("quantale counterexample --model lukasiewicz3", 0);
  EXPECT_EQ(c["outputs"]["counterexample"]["s"], json::array({json::array({0.5})}));
  const json u = run_json("quantale counterexample --model unit-interval", 0);
  EXPECT_TRUE(result(u, "functorial_on_grid")["pass"]);
}

TEST(Quantale, GroupoidFromPreset) {
  const json rep = run_json("quantale groupoid --preset z2 --model unit-interval", 0);
  EXPECT_EQ(rep["outputs"]["groupoid"]["morphisms"], 2);
}

TEST(ExitCodes, InputErrors) {
  EXPECT_EQ(run("verify --preset bogus").exit_code, 2);
  EXPECT_EQ(run("verify " + write_temp("garbage.json", "{not json")).exit_code, 2);
  EXPECT_EQ(run("verify " + write_temp("short.json", R"({"model":"complex","dim":2,"mult":[[1,2]],"unit":[1,0]})"))
                .exit_code,
            2);
  EXPECT_EQ(run("verify " + write_temp("nan.json", R"({"model":"complex","dim":1,"mult":[["nan"]],"unit":[1]})"))
                .exit_code,
            2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  // Diagnostics go to stderr only.
  EXPECT_TRUE(run("verify --preset bogus --json").out.empty());
}

TEST(Documents, AlgebraRoundTripIsExact) {
  Rng rng(3);
  const ComplexAlgebra a = conjugate_by(pair_of_pants<ComplexModel>(2), random_unitary(4, rng));
  const json j = algebra_to_json(AnyAlgebra(a));
  const AnyAlgebra back = algebra_from_json(json::parse(j.dump()));
  ASSERT_TRUE(std::holds_alternative<ComplexAlgebra>(back));
  const auto& b = std::get<ComplexAlgebra>(back);
  EXPECT_EQ(b.mult(), a.mult());
  EXPECT_EQ(b.unit(), a.unit());
  EXPECT_EQ(*b.normaliser(), *a.normaliser());

  const BoolAlgebra z = std::get<BoolAlgebra>(algebra_preset("z2", "boolean"));
  const AnyAlgebra zb = algebra_from_json(json::parse(algebra_to_json(AnyAlgebra(z)).dump()));
  EXPECT_EQ(std::get<BoolAlgebra>(zb).mult(), z.mult());
}

TEST(Documents, GroupoidRoundTrip) {
  const Groupoid g = disjoint_union(cyclic(3), indiscrete(2));
  EXPECT_EQ(groupoid_from_json(json::parse(groupoid_to_json(g).dump())), g);
}
