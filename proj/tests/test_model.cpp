#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "delaycert/model.hpp"
#include "delaycert/system_spec.hpp"
#include "delaycert/textio.hpp"
#include "helpers.hpp"

using namespace delaycert;
using Catch::Approx;
using testutil::thrown_code;

TEST_CASE("parameter reduction removes the drift rotation", "[model]") {
  SECTION("real data is left untouched") {
    const auto r = reduce_params({-1.0, 0.0}, {0.3, 0.0}, 1.0);
    CHECK(r.a == -1.0);
    CHECK(r.gamma_rot.real() == Approx(0.3).margin(1e-15));
    CHECK(r.gamma_rot.imag() == Approx(0.0).margin(1e-15));
  }
  SECTION("a pi rotation flips the sign of the coefficient") {
    const auto r = reduce_params({-1.0, kPi}, {1.0, 0.0}, 1.0);
    CHECK(r.a == -1.0);
    CHECK(r.gamma_rot.real() == Approx(-1.0).margin(1e-15));
    CHECK(r.gamma_rot.imag() == Approx(0.0).margin(1e-15));
  }
  SECTION("purely imaginary drift on the axis") {
    const auto r = reduce_params({0.0, 1.0}, {0.0, 1.0}, kPi / 2.0);
    CHECK(r.a == 0.0);
    CHECK(r.gamma_rot.real() == Approx(1.0).margin(1e-15));
    CHECK(r.gamma_rot.imag() == Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("reduction preserves the coefficient modulus", "[model]") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Complex lambda{-5.0 + 5.5 * u01(rng), -10.0 + 20.0 * u01(rng)};
    const Complex gamma{-5.0 + 10.0 * u01(rng), -5.0 + 10.0 * u01(rng)};
    const double tau = 0.05 + 4.95 * u01(rng);
    const auto r = reduce_params(lambda, gamma, tau);
    CHECK(r.a == lambda.real());
    CHECK(std::abs(r.gamma_rot) == Approx(std::abs(gamma)).epsilon(1e-14));
  }
}

TEST_CASE("component validation rejects bad data", "[model]") {
  ComponentParams ok;
  ok.lambda = {-1.0, 0.0};
  ok.gamma = {0.3, 0.0};
  ok.b = {1.0, 0.0};
  ok.tau = 1.0;
  CHECK_NOTHROW(validate_component(ok));

  auto bad = ok;
  bad.tau = 0.0;
  CHECK(thrown_code([&] { validate_component(bad); }) == Errc::delay_non_positive);
  bad.tau = -2.0;
  CHECK(thrown_code([&] { validate_component(bad); }) == Errc::delay_non_positive);

  bad = ok;
  bad.lambda = {2.0, 0.0};
  CHECK(thrown_code([&] { validate_component(bad); }) == Errc::eigenvalue_out_of_range);

  bad = ok;
  bad.lambda = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK(thrown_code([&] { validate_component(bad); }) == Errc::validation_error);
  bad = ok;
  bad.gamma = {std::numeric_limits<double>::infinity(), 0.0};
  CHECK(thrown_code([&] { validate_component(bad); }) == Errc::validation_error);
}

TEST_CASE("the growth-rate ceiling is inclusive and flagged", "[model]") {
  ComponentParams edge;
  edge.lambda = {1.0, 0.5};
  edge.gamma = {0.1, 0.0};
  edge.b = {1.0, 0.0};
  edge.tau = 1.0;
  CHECK_NOTHROW(validate_component(edge));
  CHECK(on_hypothesis_boundary(edge));

  edge.lambda = {0.5, 0.0};
  CHECK_FALSE(on_hypothesis_boundary(edge));

  edge.tau = 2.0;
  edge.lambda = {0.5, -3.0};
  CHECK(on_hypothesis_boundary(edge));
}

TEST_CASE("coefficient rules evaluate one-based", "[model]") {
  const Rule pow = power_rule({2.0, 0.0}, -2.0);
  CHECK(pow.at(1) == Complex{2.0, 0.0});
  CHECK(pow.at(2).real() == Approx(0.5));
  CHECK(pow.at(4).real() == Approx(0.125));

  const Rule geo = geometric_rule({1.0, 0.0}, {0.5, 0.0});
  CHECK(geo.at(1).real() == Approx(0.5));
  CHECK(geo.at(3).real() == Approx(0.125));

  const Rule con = constant_rule({0.1, 0.0});
  CHECK(con.at(1) == Complex{0.1, 0.0});
  CHECK(con.at(17) == Complex{0.1, 0.0});

  const Rule exp = explicit_rule({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}});
  CHECK(exp.at(2).real() == Approx(2.0));
  CHECK(thrown_code([&] { (void)exp.at(4); }) == Errc::index_error);
  CHECK(thrown_code([&] { (void)exp.at(0); }) == Errc::index_error);
}

TEST_CASE("system presets pin the structural coefficients", "[model]") {
  SECTION("square-decay preset fixes the eigenvalues") {
    DiagonalDelaySystem sys;
    sys.preset = Preset::heat;
    sys.tau = 1.0;
    sys.N = 40;
    sys.gamma_rule = constant_rule({0.1, 0.0});
    sys.b_rule = geometric_rule({1.0, 0.0}, {0.5, 0.0});
    const auto c7 = sys.component(7);
    CHECK(c7.lambda == Complex{-49.0, 0.0});
    CHECK(c7.gamma == Complex{0.1, 0.0});
    CHECK(std::abs(c7.b) == Approx(std::pow(0.5, 7)).epsilon(1e-14));
    CHECK(thrown_code([&] { (void)sys.component(0); }) == Errc::index_error);
    CHECK(thrown_code([&] { (void)sys.component(41); }) == Errc::index_error);
  }
  SECTION("undelayed-drift preset routes the rate into the feedback") {
    DiagonalDelaySystem sys;
    sys.preset = Preset::direct;
    sys.tau = 1.0;
    sys.N = 10;
    sys.lambda_rule = power_rule({-1.0, 0.0}, -2.0);
    sys.b_rule = constant_rule({1.0, 0.0});
    const auto c3 = sys.component(3);
    CHECK(c3.lambda == Complex{0.0, 0.0});
    CHECK(c3.gamma.real() == Approx(-1.0 / 9.0).epsilon(1e-15));
  }
}

TEST_CASE("explicit system assembly validates its inputs", "[model]") {
  ComponentParams c1;
  c1.lambda = {-1.0, 0.0};
  c1.gamma = {0.3, 0.0};
  c1.b = {1.0, 0.0};
  c1.tau = 1.0;
  ComponentParams c2 = c1;
  c2.lambda = {-2.0, 1.0};

  const auto sys = make_explicit_system({c1, c2});
  CHECK(sys.N == 2);
  CHECK(sys.tau == 1.0);
  CHECK(sys.component(2).lambda == c2.lambda);

  CHECK(thrown_code([] { (void)make_explicit_system({}); }) == Errc::validation_error);

  c2.tau = 2.0;
  CHECK(thrown_code([&] { (void)make_explicit_system({c1, c2}); }) == Errc::validation_error);
}

TEST_CASE("complex scalars parse and format round-trip", "[model]") {
  CHECK(parse_complex("1.5") == Complex{1.5, 0.0});
  CHECK(parse_complex("-2e-3") == Complex{-2e-3, 0.0});
  CHECK(parse_complex("3i") == Complex{0.0, 3.0});
  CHECK(parse_complex("-0.5i") == Complex{0.0, -0.5});
  CHECK(parse_complex("i") == Complex{0.0, 1.0});
  CHECK(parse_complex("-i") == Complex{0.0, -1.0});
  CHECK(parse_complex("1+2i") == Complex{1.0, 2.0});
  CHECK(parse_complex("1.5-2.5i") == Complex{1.5, -2.5});
  CHECK(parse_complex("1e-3+2e+4i") == Complex{1e-3, 2e4});
  CHECK(parse_complex(" -1.25 ") == Complex{-1.25, 0.0});

  CHECK(thrown_code([] { (void)parse_complex("abc"); }) == Errc::parse_error);
  CHECK(thrown_code([] { (void)parse_complex(""); }) == Errc::parse_error);
  CHECK(thrown_code([] { (void)parse_complex("1+2"); }) == Errc::parse_error);
  CHECK(thrown_code([] { (void)parse_complex("1++2i"); }) == Errc::parse_error);

  CHECK(format_complex({1.5, -2.0}) == "1.5-2i");
  CHECK(format_complex({0.0, 1.0}) == "0+1i");
  CHECK(parse_complex(format_complex({-0.1234567890123456, 9.87e-5})) ==
        Complex{-0.1234567890123456, 9.87e-5});
}

namespace {

void check_same_system(const DiagonalDelaySystem& a, const DiagonalDelaySystem& b) {
  REQUIRE(a.N == b.N);
  CHECK(a.tau == b.tau);
  CHECK(a.preset == b.preset);
  for (std::size_t k = 1; k <= a.N; ++k) {
    const auto ca = a.component(k);
    const auto cb = b.component(k);
    CHECK(ca.lambda == cb.lambda);
    CHECK(ca.gamma == cb.gamma);
    CHECK(ca.b == cb.b);
    CHECK(ca.tau == cb.tau);
  }
}

}  // namespace

TEST_CASE("system specs parse from JSON", "[model]") {
  const std::string heat_json = R"({
    "tau": 1.0,
    "preset": "heat",
    "N": 40,
    "gamma_rule": {"kind": "power", "coeff": [0.1, 0.0], "exponent": 0.0},
    "b_rule": {"kind": "geometric", "coeff": [1.0, 0.0], "ratio": [0.5, 0.0]}
  })";
  const auto sys = parse_system_spec(heat_json);
  CHECK(sys.N == 40);
  CHECK(sys.preset == Preset::heat);
  CHECK(sys.component(3).lambda == Complex{-9.0, 0.0});
  CHECK(sys.component(3).gamma == Complex{0.1, 0.0});
  CHECK(std::abs(sys.component(3).b) == Approx(0.125).epsilon(1e-14));

  const std::string explicit_json = R"({
    "tau": 2.0,
    "preset": "generic",
    "explicit_components": [
      {"lambda": [-1.0, 0.5], "gamma": [0.2, 0.0], "b": 1.0},
      {"lambda": -2.0, "gamma": [0.0, 0.1], "b": [0.5, 0.5], "tau": 2.0}
    ]
  })";
  const auto esys = parse_system_spec(explicit_json);
  CHECK(esys.N == 2);
  CHECK(esys.tau == 2.0);
  CHECK(esys.component(1).lambda == Complex{-1.0, 0.5});
  CHECK(esys.component(2).b == Complex{0.5, 0.5});
}

TEST_CASE("system specs reject malformed input", "[model]") {
  CHECK(thrown_code([] { (void)parse_system_spec("{"); }) == Errc::parse_error);
  CHECK(thrown_code([] { (void)parse_system_spec("[]"); }) == Errc::parse_error);
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "generic", "N": 2,
            "lambda_rule": {"kind": "power", "coeff": [-1,0], "exponent": 0},
            "gamma_rule": {"kind": "power", "coeff": [0.1,0], "exponent": 0},
            "b_rule": {"kind": "power", "coeff": [1,0], "exponent": 0},
            "bogus": 1})");
        }) == Errc::parse_error);
  // A complex value must be a number or a [re, im] pair.
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "generic",
            "explicit_components": [{"lambda": [1], "gamma": 0, "b": 1}]})");
        }) == Errc::parse_error);
  // The square-decay preset owns the eigenvalues.
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "heat", "N": 2,
            "lambda_rule": {"kind": "power", "coeff": [-1,0], "exponent": 2},
            "gamma_rule": {"kind": "power", "coeff": [0.1,0], "exponent": 0},
            "b_rule": {"kind": "power", "coeff": [1,0], "exponent": 0}})");
        }) == Errc::parse_error);
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "generic",
            "explicit_components": []})");
        }) == Errc::validation_error);
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "generic",
            "explicit_components": [
              {"lambda": -1, "gamma": 0.1, "b": 1, "tau": 1},
              {"lambda": -1, "gamma": 0.1, "b": 1, "tau": 2}]})");
        }) == Errc::validation_error);
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "generic", "N": 3,
            "explicit_components": [{"lambda": -1, "gamma": 0.1, "b": 1}]})");
        }) == Errc::validation_error);
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": 1, "preset": "heat", "N": 0,
            "gamma_rule": {"kind": "power", "coeff": [0.1,0], "exponent": 0},
            "b_rule": {"kind": "power", "coeff": [1,0], "exponent": 0}})");
        }) == Errc::validation_error);
  CHECK(thrown_code([] {
          (void)parse_system_spec(R"({"tau": -1, "preset": "heat", "N": 2,
            "gamma_rule": {"kind": "power", "coeff": [0.1,0], "exponent": 0},
            "b_rule": {"kind": "power", "coeff": [1,0], "exponent": 0}})");
        }) == Errc::delay_non_positive);
}

TEST_CASE("system specs serialize round-trip", "[model]") {
  std::vector<DiagonalDelaySystem> cases;

  {
    DiagonalDelaySystem heat;
    heat.preset = Preset::heat;
    heat.tau = 1.0;
    heat.N = 12;
    heat.gamma_rule = constant_rule({0.1, 0.05});
    heat.b_rule = geometric_rule({1.0, 0.0}, {0.5, 0.1});
    cases.push_back(heat);
  }
  {
    DiagonalDelaySystem direct;
    direct.preset = Preset::direct;
    direct.tau = 0.5;
    direct.N = 8;
    direct.lambda_rule = power_rule({-1.4707963267948966, 0.0}, -2.0);
    direct.b_rule = geometric_rule({1.0, 0.0}, {0.9, 0.0});
    cases.push_back(direct);
  }
  {
    DiagonalDelaySystem generic;
    generic.preset = Preset::generic;
    generic.tau = 2.0;
    generic.N = 5;
    generic.lambda_rule = power_rule({-2.0, 1.0}, 0.0);
    generic.gamma_rule = power_rule({0.3, 0.0}, -1.0);
    generic.b_rule = explicit_rule(
        {{1.0, 0.0}, {0.5, 0.5}, {0.25, 0.0}, {0.1, -0.1}, {0.05, 0.0}});
    cases.push_back(generic);
  }
  {
    ComponentParams c1;
    c1.lambda = {-1.0, 0.25};
    c1.gamma = {0.3, -0.1};
    c1.b = {1.0, 1.0};
    c1.tau = 1.5;
    ComponentParams c2 = c1;
    c2.lambda = {-3.0, 0.0};
    cases.push_back(make_explicit_system({c1, c2}));
  }

  for (const auto& sys : cases) {
    const std::string text = serialize_system_spec(sys);
    const auto back = parse_system_spec(text);
    check_same_system(sys, back);
    CHECK(serialize_system_spec(back) == text);
  }
}
