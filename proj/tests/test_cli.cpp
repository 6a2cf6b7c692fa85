#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbell/cli.hpp"
#include "qbell/io.hpp"

using namespace qbell;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qbell");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_state(const std::string& name, const Json& j) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << j.dump();
  return "file:" + p.string();
}

}  // namespace

TEST_CASE("spectrum of ghz(2)") {
  const auto r = run({"spectrum", "--state", "ghz", "--dim", "2"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["schema"] == "1");
  CHECK(j["spectral_norm"].get<double>() == doctest::Approx(1.0));
  const auto t = j["correlation_matrix"];
  CHECK(t[0][0].get<double>() == doctest::Approx(1.0));
  CHECK(t[1][1].get<double>() == doctest::Approx(-1.0));
  CHECK(t[2][2].get<double>() == doctest::Approx(1.0));
  CHECK(t[0][1].get<double>() == 0.0);
  CHECK(j["ghz_blocks"]["matches"] == true);
}

TEST_CASE("spectrum of ghz(6)") {
  const auto j = run({"spectrum", "--dim", "6"}).json();
  CHECK(j["spectral_norm"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(j["clusters"][0]["multiplicity"] == 15);
  CHECK(j["clusters"][1]["multiplicity"] == 20);
}

TEST_CASE("spectrum CSV") {
  const auto r = run({"spectrum", "--dim", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("a non-PSD state file names the minimum eigenvalue") {
  Json bad = state_to_json(ghz(2));
  bad["rho"][0] = {1.5, 0.0};
  bad["rho"][15] = {-0.5, 0.0};
  const auto r = run({"spectrum", "--state", write_state("qbell_cli_bad.json", bad)});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("positive-semidefinite") != std::string::npos);
  CHECK(r.err.find("eigenvalue") != std::string::npos);
}

TEST_CASE("input errors") {
  CHECK(run({"spectrum", "--state", "file:/nonexistent.json"}).code == cli::kInputError);
  CHECK(run({"spectrum", "--state", "bogus"}).code == cli::kInputError);
  CHECK(run({"spectrum", "--dim", "1"}).code == cli::kInputError);
  CHECK(run({"maximize", "--sign", "x"}).code == cli::kInputError);
  CHECK(run({"frobnicate"}).code == cli::kInputError);
  CHECK(run({"spectrum", "--state", write_state("qbell_cli_ghz3.json", state_to_json(ghz(3))), "--dim", "2"}).code ==
        cli::kInputError);
}

TEST_CASE("certify ghz(4) for both signs") {
  const auto r = run({"certify", "--state", "ghz", "--dim", "4"});
  REQUIRE(r.code == 0);
  const auto m = r.json()["membership"];
  CHECK(m["in_class"] == true);
  REQUIRE(m["signs"].size() == 2);
  for (const auto& s : m["signs"]) CHECK(s["certified"] == true);
  for (const auto& key : {"+", "-"})
    for (const auto& c : r.json()["perfect_observables"][key]) CHECK(c["accepted"] == true);
}

TEST_CASE("certify ghz(2) witnesses") {
  const auto m = run({"certify", "--dim", "2"}).json()["membership"];
  std::vector<std::vector<double>> w;
  for (const auto& s : m["signs"]) w.push_back(s["witness"].get<std::vector<double>>());
  CHECK(std::find(w.begin(), w.end(), std::vector<double>{0, 0, 1}) != w.end());
  CHECK(std::find(w.begin(), w.end(), std::vector<double>{0, 1, 0}) != w.end());
}

TEST_CASE("certify a maximally mixed file state") {
  const auto r = run({"certify", "--state", write_state("qbell_cli_mixed.json", state_to_json(maximally_mixed(4))),
                      "--dim", "4"});
  CHECK(r.code == cli::kCertificationFailure);
  CHECK(r.json()["certified"] == false);
}

TEST_CASE("odd dimensions are refused with an explanation") {
  for (const char* cmd : {"certify", "maximize"}) {
    const auto r = run({cmd, "--dim", "3"});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("odd dimension") != std::string::npos);
  }
}

TEST_CASE("maximize ghz(2)") {
  const auto r = run({"maximize", "--state", "ghz", "--dim", "2", "--sign", "+", "--restarts", "64", "--seed", "0"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(std::abs(j["report"]["best_value"].get<double>() - 1.5) <= 1e-6);
  CHECK(j["within_bound"] == true);
  CHECK_FALSE(j["report"].contains("timing"));
  CHECK(run({"maximize", "--dim", "2", "--sign=-", "--restarts", "4"}).code == 0);
  CHECK(run({"maximize", "--dim", "2", "--restarts", "2", "--timing"}).json()["report"].contains("timing"));
}

TEST_CASE("maximize on an uncertified state is a certification failure") {
  const auto r = run({"maximize", "--state", write_state("qbell_cli_mm2.json", state_to_json(maximally_mixed(2)))});
  CHECK(r.code == cli::kCertificationFailure);
}

TEST_CASE("lhv reports") {
  auto r = run({"lhv", "--models", "10000", "--sign", "+", "--seed", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["report"]["max_bell_value"].get<double>() <= 1 + 1e-9);
  r = run({"lhv", "--models", "1"});
  CHECK(r.code == 0);
  CHECK(r.json()["report"]["models_sampled"] == 1);
}

TEST_CASE("identical runs give byte-identical output") {
  const std::vector<std::string> lhv{"lhv", "--models", "500", "--seed", "3"};
  CHECK(run(lhv).out == run(lhv).out);
  const std::vector<std::string> mx{"maximize", "--dim", "4", "--restarts", "3", "--max-iters", "30"};
  CHECK(run(mx).out == run(mx).out);
}

TEST_CASE("--out writes the report to a file") {
  const auto p = std::filesystem::temp_directory_path() / "qbell_cli_out.json";
  std::filesystem::remove(p);
  const auto r = run({"spectrum", "--dim", "2", "--out", p.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(p);
  CHECK(Json::parse(in)["dim"] == 2);
}

TEST_CASE("QBELL_SEED sets the default seed") {
  const std::vector<std::string> args{"lhv", "--models", "50"};
  const std::string base = run({"lhv", "--models", "50", "--seed", "42"}).out;
  setenv("QBELL_SEED", "42", 1);
  const std::string env = run(args).out;
  unsetenv("QBELL_SEED");
  CHECK(env == base);
  CHECK(run(args).out != base);
  setenv("QBELL_THREADS", "two", 1);
  CHECK(run(args).code == cli::kInputError);
  unsetenv("QBELL_THREADS");
}

TEST_CASE("basis dump") {
  const auto j = run({"basis", "--dim", "3"}).json();
  CHECK(j["generators"].size() == 8);
}
