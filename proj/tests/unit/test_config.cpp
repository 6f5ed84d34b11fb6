#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fnlw/commands.hpp"
#include "fnlw/config.hpp"
#include "fnlw/report.hpp"

using namespace fnlw;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped defaults") {
  const RunConfig base = RunConfig::defaults();
  CHECK(base.version == "1");
  CHECK(base.alpha == 0.9);
  CHECK(base.m == 1);
  CHECK(base.N == 8);
  CHECK(base.radii == std::vector<int>{4, 8, 16, 32});
  CHECK(base.lambda_grid.size() == 13);
  CHECK(base.lambda_grid.back() == 300.0);
  CHECK(base.tol.hamiltonian_drift == 1e-6);
  CHECK(base.tol.z_max == 3.0);
  CHECK_NOTHROW(base.validate());
  for (const std::string& command : command_names()) CHECK_NOTHROW(RunConfig::defaults(command).validate());

  CHECK(RunConfig::defaults("regularity").N == 32);
  CHECK(RunConfig::defaults("regularity").alpha == 0.95);
  CHECK(RunConfig::defaults("evolve").N == 16);
  CHECK(RunConfig::defaults("picard").T == 0.05);
  CHECK(RunConfig::defaults("tail").samples == 100000);
  CHECK(RunConfig::defaults("sample").N == base.N);
}

TEST_CASE("parsing and overrides") {
  const RunConfig base = RunConfig::defaults();
  const std::string text =
      "# comment\n"
      "alpha = 0.8\n"
      "\n"
      "tail.samples = 77   # trailing comment\n"
      "radii = 2, 4\n"
      "sample.alpha = 0.7\n";
  const RunConfig tail = RunConfig::parse(text, "tail", base);
  CHECK(tail.alpha == 0.8);
  CHECK(tail.samples == 77);
  CHECK(tail.radii == std::vector<int>{2, 4});
  const RunConfig sample = RunConfig::parse(text, "sample", base);
  CHECK(sample.alpha == 0.7);
  CHECK(sample.samples == base.samples);

  // Command lines win regardless of their position in the file.
  CHECK(RunConfig::parse("sample.N = 3\nN = 5\n", "sample", base).N == 3);

  CHECK(error_of([&] { RunConfig::parse("nonsense = 1\n", "", base); }).find("nonsense") !=
        std::string::npos);
  CHECK(error_of([&] { RunConfig::parse("alpha 0.5\n", "", base); }).find("line 1") != std::string::npos);
  CHECK(error_of([&] { RunConfig::parse("bogus.alpha = 0.5\n", "", base); }).find("bogus") !=
        std::string::npos);
  CHECK(error_of([&] { RunConfig::parse("N = eight\n", "", base); }).find("eight") != std::string::npos);
  CHECK(error_of([&] { RunConfig::parse("N = 3.5\n", "", base); }) != "");
}

TEST_CASE("serialization round trip") {
  RunConfig c = RunConfig::defaults("invariance");
  c.alpha = 0.1 + 0.2;  // not a short decimal
  c.dt = 1.0 / 3.0;
  c.seed = 18446744073709551615ull;
  c.lambda_grid = {0.0, 1e-7, 2.5};
  c.out = "some dir";
  c.tol.ess_fraction = std::nextafter(0.05, 1.0);
  const RunConfig back = RunConfig::parse(c.serialize(), "", RunConfig{});
  CHECK(back == c);
  for (const auto& key : RunConfig::keys()) CHECK(back.get(key) == c.get(key));
  c.set("tol_hamiltonian_drift", "inf");
  CHECK(std::isinf(c.tol.hamiltonian_drift));
  CHECK(RunConfig::parse(c.serialize(), "", RunConfig{}) == c);
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "fnlw_test_config.cfg";
  std::ofstream(path) << "seed = 99\nevolve.T = 0.5\n";
  const RunConfig c = RunConfig::load_file(path.string(), "evolve", RunConfig::defaults("evolve"));
  CHECK(c.seed == 99);
  CHECK(c.T == 0.5);
  CHECK(c.N == 16);
  std::filesystem::remove(path);
  CHECK(error_of([&] { RunConfig::load_file(path.string(), "", RunConfig{}); }).find("cannot read") !=
        std::string::npos);
}

TEST_CASE("validation messages") {
  auto message = [](std::string_view key, std::string_view value) {
    RunConfig c = RunConfig::defaults();
    c.set(key, value);
    return error_of([&] { c.validate(); });
  };
  CHECK(message("alpha", "1.5").find("alpha") != std::string::npos);
  CHECK(message("alpha", "0").find("alpha") != std::string::npos);
  CHECK(message("m", "0") != "");
  CHECK(message("N", "-1") != "");
  CHECK(message("grid", "9") != "");  // below (2m+2)N+1 for N = 8
  CHECK(message("samples", "0").find("samples") != std::string::npos);
  CHECK(message("dt", "0").find("dt") != std::string::npos);
  CHECK(message("beta", "1.5").find("beta") != std::string::npos);
  CHECK(message("l", "4").find("l must") != std::string::npos);
  CHECK(message("k1", "3").find("k1") != std::string::npos);
  CHECK(message("p", "2").find("2/p + 2/q") != std::string::npos);
  CHECK(message("thin", "0").find("thin") != std::string::npos);
  CHECK(message("alpha", "0.5") == "");
}

TEST_CASE("lattice size") {
  RunConfig c = RunConfig::defaults();
  c.N = 8;
  CHECK(c.lattice_size() >= 4 * 8 + 1);
  c.grid = 40;
  CHECK(c.lattice_size() == 40);
}

TEST_CASE("provenance and CSV") {
  RunConfig a = RunConfig::defaults("tail");
  RunConfig b = a;
  b.workers = 7;
  b.out = "elsewhere";
  const Json pa = provenance(a, "tail"), pb = provenance(b, "tail");
  CHECK(pa == pb);
  CHECK(pa["command"] == "tail");
  CHECK(pa["config"]["seed"] == a.get("seed"));
  CHECK(!pa["config"].contains("workers"));
  CHECK(pa.dump() != provenance(a, "evolve").dump());

  CsvTable t({"name", "value", "flag"});
  t.row().add("plain").add(0.1).add(true);
  t.row().add("with, comma \"q\"").add(-3L).add(false);
  CHECK(t.str() == "name,value,flag\nplain,0.1,1\n\"with, comma \"\"q\"\"\",-3,0\n");
  CHECK(CsvTable({"x"}).row().add(1.0 / 3.0).str() == "x\n0.333333333\n");
}
