#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "rydberg/io.hpp"

using namespace rydberg;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("doubles round-trip") {
    for (double x : {0.1, 1.0 / 3, -2.5e-300, 123456789.0}) CHECK(std::stod(format_double(x)) == x);
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
  }

  TEST_CASE("decimal expansion of rationals") {
    CHECK(decimal_string(Rational(1, 4)) == "2.5e-1");
    CHECK(decimal_string(Rational(-1, 3), 10) == "-3.333333333e-1");
    CHECK(decimal_string(Rational(3023, 1)) == "3.023e3");
    CHECK(decimal_string(Rational(0)) == "0");
  }

  TEST_CASE("coefficient CSV carries the config echo and exact values") {
    CoefficientExport data;
    data.coefficients = density_coefficients(ModelSpec::line(12), 3);
    data.deficits = boundary_deficit_q(3, 12);
    std::ostringstream os;
    write_coefficients(os, data, {{"command", "coeffs"}, {"L", "12"}}, OutputFormat::kCsv);
    const auto l = lines(os.str());
    REQUIRE(l.size() == 6);
    CHECK(l[0] == "# command = coeffs");
    CHECK(l[1] == "# L = 12");
    CHECK(l[2].find("q_numerator") != std::string::npos);
    CHECK(l[4] == "\"density\",line,1,12,2,4,-17,18,false,false,symbolic,2,3");
    data.deficits.pop_back();
    CHECK_THROWS(write_coefficients(os, data, {}, OutputFormat::kCsv));
  }

  TEST_CASE("coefficient JSON parses back") {
    CoefficientExport data;
    data.coefficients = density_coefficients(ModelSpec::infinite_line(2), 3);
    data.source = "matrix-oracle";
    std::ostringstream os;
    write_coefficients(os, data, {{"jmax", "3"}}, OutputFormat::kJson);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j["config"]["jmax"] == "3");
    CHECK(j["lambda_b"] == 2);
    CHECK(j["source"] == "matrix-oracle");
    REQUIRE(j["coefficients"].size() == 3);
    CHECK(j["coefficients"][1]["numerator"] == "-5");
    CHECK(j["coefficients"][1]["denominator"] == "3");
  }

  TEST_CASE("tables") {
    const Table t{{"t", "value"}, {{0, 1.5}, {0.5, NAN}}};
    std::ostringstream csv;
    write_table(csv, t, {{"k", "v"}}, OutputFormat::kCsv);
    CHECK(lines(csv.str()) == std::vector<std::string>{"# k = v", "t,value", "0,1.5", "0.5,nan"});
    std::ostringstream js;
    write_table(js, t, {}, OutputFormat::kJson);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["columns"]["value"][0] == 1.5);
    CHECK(parse_output_format("json") == OutputFormat::kJson);
    CHECK_THROWS(parse_output_format("xml"));
  }
}
