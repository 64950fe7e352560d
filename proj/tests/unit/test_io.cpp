#include <doctest.h>

#include "hillzone/errors.hpp"
#include "hillzone/potential_io.hpp"
#include "oracles.hpp"

using namespace hillzone;

namespace {

ConfigError config_error(const std::string& text) {
  try {
    parse_potential(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("", "", 0);
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("sample files load") {
    const auto saw = load_potential_file(oracle::data("sawtooth.yaml"));
    CHECK(saw.name == "sawtooth");
    CHECK(saw.assert_pt);
    CHECK(saw.potential.kind_name() == "piecewise");
    REQUIRE(saw.potential.jumps().size() == 1);
    CHECK(saw.potential.jumps()[0].component == Component::Im);
    CHECK(saw.potential.jumps()[0].size == 1.0);

    const auto m = load_potential_file(oracle::data("mathieu.yaml"));
    CHECK(m.potential.coefficient(1) == cplx{1.0});
    CHECK(m.potential.coefficient(-1) == cplx{1.0});
    CHECK(m.potential.smoothness() == 4);

    const auto z = load_potential_file(oracle::data("zero.yaml"));
    CHECK(z.potential.coefficient(3) == cplx{});

    const auto s = load_potential_file(oracle::data("sampled_pt.yaml"));
    CHECK(s.potential.bandwidth() == 256);
    CHECK(std::abs(s.potential.coefficient(1) - cplx{1.25}) < 1e-10);
    CHECK(std::abs(s.potential.coefficient(-1) - cplx{0.75}) < 1e-10);
  }

  TEST_CASE("errors cite key and line") {
    auto e = config_error("representation: fourier\nfourier:\n  - [1, 1.0]\n");
    CHECK(e.key() == "fourier[0]");
    CHECK(e.line() == 3);

    e = config_error("representation: fourier\ncolour: blue\n");
    CHECK(e.key() == "colour");
    CHECK(e.line() == 2);

    e = config_error("representation: spline\n");
    CHECK(e.key() == "representation");
    CHECK(e.line() == 1);

    e = config_error("representation: piecewise\npieces:\n  - interval: [0, 1]\n    poly_re: [x]\n");
    CHECK(e.key().find("poly_re") != std::string::npos);

    e = config_error("representation: fourier\nfourier: []\njumps:\n  - {location: 1.5, component: im, size: 1}\n");
    CHECK(e.key() == "jumps[0].location");
    CHECK(e.line() == 4);

    e = config_error("representation: fourier\nfourier: [[1, 1, 0]\n");
    CHECK(e.line() >= 2);

    CHECK(e.payload().contains("line"));
  }

  TEST_CASE("missing files are configuration errors") {
    CHECK_THROWS_AS(load_potential_file(oracle::data("absent.yaml")), ConfigError);
    CHECK_THROWS_AS(parse_potential("representation: sampled\nsamples: nowhere.csv\n"), ConfigError);
  }
}
