#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qcosym/cli/commands.hpp"

using namespace qcosym;
using namespace qcosym::cli;

namespace {

json cfg(const std::string& name) { return load_config(std::string(QCOSYM_CONFIG_DIR) + "/" + name); }

CsvReport roundtrip(const CsvReport& r) {
  std::stringstream ss;
  r.write(ss);
  return CsvReport::read(ss);
}

double cell(const CsvReport& r, std::size_t row, const std::string& col) {
  return parse_double(r.rows()[row][r.column(col)]);
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1e-8, 0.0, -0.0,
                   std::nextafter(1.0, 2.0)}) {
    const auto s = format_double(v);
    CHECK(parse_double(s) == v);
    CHECK(std::signbit(parse_double(s)) == std::signbit(v));
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::isnan(parse_double("nan")));
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK_THROWS(parse_double("1.0x"));
}

TEST_CASE("CsvReport is rectangular and round-trips") {
  CsvReport r;
  r.set_header({"a", "b"});
  r.add_row(std::vector<double>{1.0, 0.1});
  r.add_row(std::vector<double>{std::nan(""), -3.25});
  r.add_meta("note", "two\nlines");
  CHECK_THROWS_AS(r.add_row(std::vector<double>{1.0}), std::invalid_argument);
  const auto back = roundtrip(r);
  CHECK(back.header() == r.header());
  CHECK(back.rows() == r.rows());
  CHECK(back.meta_value("note") == "two lines");
}

TEST_CASE("config parsing") {
  const auto j = parse_config(R"({"model": {"eps": 0.1, "epsilon": 1}})");
  CHECK_THROWS_AS(parse_model(j.at("model")), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"modle": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_model(json::parse(R"({"eps": "0.1"})")), ConfigError);
  CHECK_THROWS_AS(parse_model(json::parse(R"({"eps": -1})")), PreconditionError);

  const auto m = parse_model(json::parse(R"({"b": {"form": "sine", "k": [0.8, 0.1, 2, 0]}})"));
  CHECK(m.b(0.25) == doctest::Approx(0.8 + 0.1 * std::sin(0.5)));
  CHECK(m.c(3.0) == 0.7);
  CHECK_THROWS_AS(parse_coefficient(json::parse(R"({"form": "sine", "k": [1]})"), "b"), ConfigError);

  const auto t = parse_time(json::parse(R"({"t0": 0, "t1": 2, "samples": 5})"));
  CHECK(t.outputs() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK_THROWS_AS(parse_time(json::parse(R"({"t0": 1, "t1": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_integrator(json::parse(R"({"rel_tol": 0})")), PreconditionError);
}

TEST_CASE("validate-hj") {
  auto res = run_command("validate-hj", cfg("validate_hj.json"), {});
  REQUIRE(res.exit_code == kExitOk);
  const auto r = roundtrip(res.report);
  CHECK(r.header() == std::vector<std::string>{"t", "x", "y", "z", "p_x", "p_y", "p_z",
                                                "S_x_reconstructed", "ratio", "max_dev"});
  CHECK(r.rows().size() == 51);
  CHECK(parse_double(r.meta_value("max_dev")) <= 1e-8);
  CHECK(cell(r, 50, "max_dev") == parse_double(r.meta_value("max_dev")));
  CHECK(r.meta_value("command") == "validate-hj");
  CHECK_FALSE(r.meta_value("wall_time_s").empty());

  auto bad = cfg("validate_hj.json");
  bad["initial"]["p_x"] = 5.0;
  res = run_command("validate-hj", bad, {});
  CHECK(res.exit_code == kExitConfig);
  CHECK(res.message.find("precondition") != std::string::npos);

  res = run_command("validate-hj", cfg("validate_hj_nullcline.json"), {});
  CHECK(res.exit_code == kExitNullcline);
  CHECK(res.message.find("t = ") != std::string::npos);

  auto strict = cfg("validate_hj.json");
  strict["validate_hj"]["threshold"] = 1e-16;
  CHECK(run_command("validate-hj", strict, {}).exit_code == kExitThreshold);
}

TEST_CASE("simulate") {
  auto c = cfg("simulate.json");
  auto res = run_command("simulate", c, {});
  REQUIRE(res.exit_code == kExitOk);
  auto r = res.report;
  CHECK(r.rows().size() == 101);
  CHECK(cell(r, 100, "t_f") == doctest::Approx(10.0 / 0.1));
  CHECK(cell(r, 100, "t_i") == doctest::Approx(10.0 / 0.5));

  // Equilibrium start gives constant columns; zero momenta stay zero.
  const auto prm = parse_model(c.at("model"));
  const auto eq = fhn::equilibrium(prm, 0.0);
  c["initial"] = {{"x", eq[0]}, {"y", eq[1]}, {"z", eq[2]}};
  r = run_command("simulate", c, {}).report;
  for (std::size_t k = 0; k < r.rows().size(); ++k) {
    CHECK(std::abs(cell(r, k, "x") - eq[0]) <= 1e-12);
    CHECK(std::abs(cell(r, k, "z") - eq[2]) <= 1e-12);
    CHECK(cell(r, k, "p_x") == 0.0);
    CHECK(cell(r, k, "p_z") == 0.0);
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  auto c = cfg("simulate.json");
  c["simulate"]["colors"] = true;
  CHECK(run_command("simulate", c, {}).exit_code == kExitConfig);
  c = cfg("simulate.json");
  c["linearize"] = json::object();
  CHECK(run_command("simulate", c, {}).exit_code == kExitConfig);
  CHECK(run_command("frobnicate", cfg("simulate.json"), {}).exit_code == kExitConfig);
}

TEST_CASE("reduce") {
  const auto res = run_command("reduce", cfg("reduce.json"), {});
  REQUIRE(res.exit_code == kExitOk);
  const auto& r = res.report;
  CHECK(r.rows().size() == 301);
  const double fast = parse_double(r.meta_value("max_fast_post"));
  CHECK(fast < 0.05);
  CHECK(std::isfinite(parse_double(r.meta_value("max_int_post"))));
}

TEST_CASE("linearize") {
  const auto res = run_command("linearize", cfg("linearize.json"), {});
  REQUIRE(res.exit_code == kExitOk);
  const auto& r = res.report;
  CHECK(r.header().size() == 4 + 9 + 3 + 3);
  CHECK(cell(r, 0, "P13") == 0.3);
  CHECK(cell(r, 0, "Q1") == 0.3);
  const double uPu0 = cell(r, 0, "uPu");
  for (std::size_t k = 0; k < r.rows().size(); ++k) {
    CHECK(std::abs(cell(r, k, "uPu") - uPu0) <= 1e-8);
    CHECK(cell(r, k, "P12") == cell(r, k, "P21"));
  }
}

TEST_CASE("characteristics are thread-count independent") {
  const auto c = cfg("characteristics.json");
  const auto one = run_command("characteristics", c, {0, 1});
  const auto four = run_command("characteristics", c, {0, 4});
  REQUIRE(one.exit_code == kExitOk);
  REQUIRE(four.exit_code == kExitOk);
  CHECK(one.report.rows() == four.report.rows());
  CHECK(one.report.rows().size() == 4 * 41);
  for (std::size_t k = 0; k < 41; ++k) CHECK(cell(one.report, k, "S") == 0.375);
}

TEST_CASE("check-structure sets") {
  auto c = cfg("check_structure.json");
  auto res = run_command("check-structure", c, {7, 1});
  REQUIRE(res.exit_code == kExitOk);
  CHECK(res.report.meta_value("seed") == "7");

  auto value = [](const CsvReport& r, const std::string& check) {
    for (const auto& row : r.rows())
      if (row[0] == check) return parse_double(row[1]);
    return std::nan("");
  };
  c["check_structure"] = {{"set", "heisenberg"}, {"samples", 30}};
  res = run_command("check-structure", c, {3, 1});
  REQUIRE(res.exit_code == kExitOk);
  CHECK(std::abs(value(res.report, "c_12^3") - 1.0) <= 1e-8);
  CHECK(value(res.report, "solvable") == 1.0);
  CHECK(res.report.meta_value("derived_dims") == "[3,1,0]");

  c["check_structure"] = {{"set", "so3"}, {"samples", 30}};
  res = run_command("check-structure", c, {3, 1});
  CHECK(value(res.report, "solvable") == 0.0);

  c["check_structure"] = {{"set", "abelian"}, {"samples", 30}};
  res = run_command("check-structure", c, {3, 1});
  CHECK(res.report.meta_value("derived_dims") == "[2,0]");

  c["check_structure"] = {{"set", "klein"}};
  CHECK(run_command("check-structure", c, {}).exit_code == kExitConfig);
}

TEST_CASE("config echo reproduces the run") {
  const auto first = run_command("check-structure", cfg("check_structure.json"), {11, 1});
  const auto echoed = parse_config(roundtrip(first.report).meta_value("config"));
  const auto second = run_command("check-structure", echoed, {11, 1});
  CHECK(first.report.rows() == second.report.rows());

  const auto lin = run_command("linearize", cfg("linearize.json"), {});
  const auto again = run_command("linearize", parse_config(lin.report.meta_value("config")), {});
  CHECK(lin.report.rows() == again.report.rows());
}
