#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hillzone/run.hpp"
#include "oracles.hpp"

using namespace hillzone;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Command cmd, const std::string& file) {
  RunConfig c;
  c.command = cmd;
  c.potential_path = oracle::data(file);
  return c;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hillzone_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("discriminant CSV for the free potential") {
    auto c = config(Command::Discriminant, "zero.yaml");
    c.lambda_min = 0.0;
    c.lambda_max = 400.0;
    c.lambda_count = 41;
    const auto r = invoke(c);
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "lambda_re,lambda_im,F_re,F_im,wronskian_err");
    int rows = 0;
    while (std::getline(in, line)) {
      double lr, li, fr, fi, w;
      char sep;
      std::istringstream row(line);
      row >> lr >> sep >> li >> sep >> fr >> sep >> fi >> sep >> w;
      CHECK(std::abs(fr - 2 * std::cos(std::sqrt(lr))) < 1e-9);
      CHECK(std::abs(fi) < 1e-9);
      ++rows;
    }
    CHECK(rows == 41);
  }

  TEST_CASE("output is deterministic") {
    auto c = config(Command::Gaps, "mathieu.yaml");
    c.n_horizon = 4;
    const auto a = invoke(c), b = invoke(c);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    c = config(Command::Criteria, "sawtooth.yaml");
    CHECK(invoke(c).out == invoke(c).out);
  }

  TEST_CASE("gaps and criteria JSON") {
    auto c = config(Command::Gaps, "exp.yaml");
    c.n_horizon = 4;
    auto r = invoke(c);
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["gaps"].empty());
    CHECK(j["finite_zone_spectral"]["verdict"] == "FiniteZone");

    c = config(Command::Criteria, "sawtooth.yaml");
    r = invoke(c);
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["combined"]["verdict"] == "FiniteZone");
  }

  TEST_CASE("bands CSV") {
    auto c = config(Command::Bands, "mathieu.yaml");
    c.band_indices = {1, -2};
    const auto r = invoke(c);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n,t,lambda_re,lambda_im", 0) == 0);
    CHECK(r.out.find("\n-2,") != std::string::npos);
  }

  TEST_CASE("verdicts on the sample potentials") {
    auto r = invoke(config(Command::Verdict, "sawtooth.yaml"));
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["spectral"] == "FiniteZone");
    CHECK(j["algebraic"] == "FiniteZone");
    CHECK(j["agree"] == "true");

    r = invoke(config(Command::Verdict, "mathieu.yaml"));
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["algebraic"] == "NotConcluded");
    CHECK(j["agree"] == "true-on-nonfinite");
  }

  TEST_CASE("verdict comparison table") {
    using V = Verdict;
    using A = AlgebraicVerdict;
    CHECK(compare_verdicts(V::FiniteZone, A::FiniteZone).agree == "true");
    CHECK(compare_verdicts(V::FiniteZone, A::NotConcluded).agree == "conditionally");
    CHECK(compare_verdicts(V::InfiniteZone, A::NotConcluded).agree == "true-on-nonfinite");
    CHECK(compare_verdicts(V::InfiniteZone, A::FiniteZone).agree == "false");
    CHECK(compare_verdicts(V::Undetermined, A::FiniteZone).agree == "conditionally");
    CHECK(compare_verdicts(V::Undetermined, A::NotConcluded).agree == "true-on-nonfinite");
  }

  TEST_CASE("exit codes") {
    auto c = config(Command::Gaps, "absent.yaml");
    auto r = invoke(c);
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"]["error"] == "ConfigError");

    c = config(Command::Gaps, "zero.yaml");
    c.K = 2;
    CHECK(invoke(c).code == 2);

    c = config(Command::Criteria, "zero.yaml");
    c.format = Format::Csv;
    CHECK(invoke(c).code == 2);

    c = config(Command::Report, "zero.yaml");
    CHECK(invoke(c).code == 2);

    // Declared PT but 2i cos(2 pi x) is not.
    const auto bad = scratch("not_pt.yaml");
    std::ofstream(bad) << "name: not_pt\nrepresentation: fourier\nassert_pt: true\nfourier:\n"
                          "  - [1, 0, 1]\n  - [-1, 0, 1]\n";
    c = config(Command::Gaps, "zero.yaml");
    c.potential_path = bad;
    r = invoke(c);
    CHECK(r.code == 3);
    CHECK(json::parse(r.err)["error"]["error"] == "InvalidPotential");
  }

  TEST_CASE("report writes its files") {
    const auto dir = scratch("report");
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto c = config(Command::Report, "exp.yaml");
    c.n_horizon = 4;
    c.output_path = dir;
    const auto r = invoke(c);
    REQUIRE(r.code == 0);
    for (const char* f : {"report.json", "bands.csv", "intervals.csv"}) CHECK(fs::exists(dir / f));
    std::ifstream in(dir / "report.json");
    const auto j = json::parse(in);
    CHECK(j.contains("verdict"));
    CHECK(j.contains("two_periodic"));
  }
}
