#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "kza/cli.hpp"
#include "kza/json_io.hpp"

using namespace kza;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("kza_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

nlohmann::json read_json(const std::string& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

nlohmann::json strip_timings(nlohmann::json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST_CASE("associator at order zero is the constant series") {
  TempDir tmp;
  std::string out = tmp.file("phi0.json");
  int code = run_cli({"associator", "--order", "0", "--steps", "64", "--grid",
                      "2^-4..2^-6", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  TruncatedSeries phi = series_from_json(j["phi"]);
  CHECK(phi.order() == 0);
  CHECK(phi.coeff(0) == AlgebraElement::unit());
}

TEST_CASE("associator run writes grid diagnostics") {
  TempDir tmp;
  std::string out = tmp.file("phi.json");
  int code = run_cli({"associator", "--order", "3", "--steps", "512", "--grid",
                      "2^-4..2^-8", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  CHECK(j["converged"] == true);
  CHECK(j["grid"].size() == 5);
  CHECK(j["convergence"].size() == 4);
  TruncatedSeries phi = series_from_json(j["phi"]);
  CHECK(phi.coeff(0) == AlgebraElement::unit());
  CHECK(phi.coeff(1).sup_norm() < 1e-2);  // vanishes with the grid
}

TEST_CASE("commuting associator is trivial") {
  TempDir tmp;
  std::string out = tmp.file("phi_comm.json");
  int code = run_cli({"associator", "--commuting", "--order", "4", "--steps", "512",
                      "--out", out});
  CHECK(code == 0);
  TruncatedSeries phi = series_from_json(read_json(out)["phi"]);
  CHECK(max_defect(phi, TruncatedSeries::one(4, phi.alphabet())) < 1e-6);
}

TEST_CASE("verify hexagon limit mode") {
  TempDir tmp;
  std::string out = tmp.file("hex.json");
  int code = run_cli({"verify", "hexagon", "--mode", "limit", "--order", "3",
                      "--steps", "512", "--grid", "2^-4..2^-9", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  CHECK(j["pass"] == true);
  CHECK(j["report"]["identity"] == "hexagon");
  CHECK(j["report"]["mode"] == "limit");
}

TEST_CASE("verify pentagon finite mode") {
  TempDir tmp;
  std::string out = tmp.file("pent.json");
  int code = run_cli({"verify", "pentagon", "--mode", "finite", "--delta", "0.125",
                      "--order", "3", "--steps", "1024", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  CHECK(j["pass"] == true);
  CHECK(j["report"]["max_residual"].get<double>() < 1e-6);
}

TEST_CASE("commuting images at finite regulator") {
  TempDir tmp;
  std::string out = tmp.file("hexc.json");
  int code = run_cli({"verify", "hexagon", "--images", "commuting", "--mode", "finite",
                      "--delta", "0.125", "--order", "3", "--steps", "512", "--out",
                      out});
  CHECK(code == 0);
  CHECK(read_json(out)["report"]["max_residual"].get<double>() < 1e-9);
}

TEST_CASE("violated centrality exits with the precondition code") {
  TempDir tmp;
  int code = run_cli({"verify", "hexagon", "--images", "free", "--order", "2",
                      "--steps", "64", "--out", tmp.file("x.json")});
  CHECK(code == 3);
}

TEST_CASE("transport of the interval family with commuting scalars") {
  TempDir tmp;
  std::string out = tmp.file("w.json");
  int code = run_cli({"transport", "--path",
                      "{\"family\":\"interval\",\"delta\":0.25,\"epsilon\":0.25}",
                      "--commuting", "--order", "5", "--steps", "1024", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  TruncatedSeries w = series_from_json(j["propagator"]);
  // closed commuting form
  AlgebraElement a = AlgebraElement::scalar(Cplx(0.55, 0.15));
  AlgebraElement b = AlgebraElement::scalar(Cplx(-0.35, 0.25));
  double d = 0.25;
  TruncatedSeries ref =
      exp_linear(std::log(d), b, 5, w.alphabet()) *
      exp_proper(series_from_element((a - b) * std::log(1 - d), 1, 5, w.alphabet())) *
      exp_linear(-std::log(d), a, 5, w.alphabet());
  CHECK(max_defect(w, ref) < 1e-8);
  CHECK(j["quadrature"]["estimated_error"].get<double>() < 1e-8);
}

TEST_CASE("transport of one hexagon leg is a group element") {
  TempDir tmp;
  std::string out = tmp.file("leg4.json");
  int code = run_cli({"transport", "--path",
                      "{\"family\":\"hexagon\",\"delta\":0.125,\"leg\":4}", "--order",
                      "3", "--steps", "512", "--out", out});
  CHECK(code == 0);
  TruncatedSeries w = series_from_json(read_json(out)["propagator"]);
  CHECK(w.coeff(0) == AlgebraElement::unit());
}

TEST_CASE("hexagon loop transport reports the residual") {
  TempDir tmp;
  std::string out = tmp.file("loop.json");
  int code = run_cli({"transport", "--path",
                      "{\"family\":\"hexagon\",\"delta\":0.125}", "--order", "3",
                      "--steps", "512", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  CHECK(j["pass"] == true);
  CHECK(j["loop_residual"].get<double>() <= 1e-6);
}

TEST_CASE("pentagon half-path legs are addressable") {
  TempDir tmp;
  std::string out = tmp.file("iv2.json");
  int code = run_cli({"transport", "--path",
                      "{\"family\":\"pentagon\",\"delta\":0.125,\"leg\":\"IV-2\"}",
                      "--order", "2", "--steps", "256", "--out", out});
  CHECK(code == 0);
  TruncatedSeries w = series_from_json(read_json(out)["propagator"]);
  CHECK(w.coeff(0) == AlgebraElement::unit());
}

TEST_CASE("sampled path specs are rejected") {
  TempDir tmp;
  int code = run_cli({"transport", "--path", "{\"kind\":\"sampled\",\"points\":[]}",
                      "--out", tmp.file("x.json")});
  CHECK(code == 3);
}

TEST_CASE("flatness of the triangle connection") {
  TempDir tmp;
  std::string out = tmp.file("flat.json");
  int code = run_cli({"flatness", "--connection", "pentagon", "--samples", "10",
                      "--seed", "1", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  CHECK(j["pass"] == true);
  CHECK(j["max_residual"].get<double>() <= 1e-10);
  CHECK(j["samples"].size() == 10);
}

TEST_CASE("free images fail the flatness check") {
  TempDir tmp;
  std::string out = tmp.file("flat_free.json");
  int code = run_cli({"flatness", "--connection", "kz-free", "--samples", "4",
                      "--seed", "2", "--out", out});
  CHECK(code == 1);
  CHECK(read_json(out)["pass"] == false);
}

TEST_CASE("one-dimensional connections are vacuously flat") {
  TempDir tmp;
  std::string out = tmp.file("flat1d.json");
  int code = run_cli({"flatness", "--connection", "interval", "--out", out});
  CHECK(code == 0);
  CHECK(read_json(out)["max_residual"].get<double>() == 0.0);
}

TEST_CASE("violated braid relations exit with the precondition code") {
  TempDir tmp;
  int code = run_cli({"verify", "pentagon", "--images", "free", "--order", "2",
                      "--steps", "64", "--out", tmp.file("x.json")});
  CHECK(code == 3);
}

TEST_CASE("classify the hexagon remainder family") {
  TempDir tmp;
  std::string out = tmp.file("clsh.json");
  int code = run_cli({"classify", "--family", "hexagon-remainder", "--order", "2",
                      "--steps", "256", "--grid", "2^-4..2^-9", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  for (int r = 1; r <= 2; ++r)
    CHECK(j["diagnostics"]["per_degree"][r]["class"] == "H");
}

TEST_CASE("classify the singular family") {
  TempDir tmp;
  std::string out = tmp.file("cls.json");
  int code = run_cli({"classify", "--family", "singular", "--order", "3", "--grid",
                      "2^-4..2^-10", "--out", out});
  CHECK(code == 0);
  nlohmann::json j = read_json(out);
  for (int r = 1; r <= 3; ++r) {
    auto& e = j["diagnostics"]["per_degree"][r];
    CHECK(e["class"] == "L");
    CHECK(std::abs(e["alpha"].get<double>() - r) < 0.2);
  }
}

TEST_CASE("identical configurations replay byte-identically") {
  TempDir tmp;
  std::string out1 = tmp.file("a.json"), out2 = tmp.file("b.json");
  std::vector<std::string> args{"associator", "--order", "3", "--steps", "256",
                                "--grid", "2^-4..2^-7", "--out", ""};
  args.back() = out1;
  CHECK(run_cli(args) == 0);
  args.back() = out2;
  CHECK(run_cli(args) == 0);
  CHECK(strip_timings(read_json(out1)) == strip_timings(read_json(out2)));
}

TEST_CASE("warm and cold cache runs agree") {
  TempDir tmp;
  fs::path cache = tmp.path / "cache";
  std::string out1 = tmp.file("cold.json"), out2 = tmp.file("warm.json");
  std::vector<std::string> base{"verify",  "pentagon", "--mode", "finite",
                                "--delta", "0.125",    "--order", "3",
                                "--steps", "512",      "--cache-dir", cache.string(),
                                "--out",   ""};
  base.back() = out1;
  CHECK(run_cli(base) == 0);
  CHECK(fs::exists(cache));
  CHECK(!fs::is_empty(cache));
  base.back() = out2;
  CHECK(run_cli(base) == 0);
  CHECK(strip_timings(read_json(out1)) == strip_timings(read_json(out2)));
}

TEST_CASE("configuration validation") {
  TempDir tmp;
  CHECK(run_cli({"associator", "--order", "-2", "--out", tmp.file("x.json")}) == 3);
  CHECK(run_cli({"associator", "--grid", "0.1,0.2", "--out", tmp.file("x.json")}) == 3);
  CHECK(run_cli({"verify", "pentagon", "--delta", "0.7", "--out", tmp.file("x.json")}) ==
        3);
  CHECK(run_cli({"transport", "--path", "{\"family\":\"nope\"}", "--out",
                 tmp.file("x.json")}) == 3);
}
