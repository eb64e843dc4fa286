#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rydberg/series.hpp"

namespace rydberg {

// Ordered key/value echo of the configuration that produced a file; written
// as "# key = value" header lines (CSV) or a "config" object (JSON).
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

enum class OutputFormat { kCsv, kJson };
OutputFormat parse_output_format(const std::string& name);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);
// Decimal expansion of a rational to `digits` significant digits.
std::string decimal_string(const Rational& q, int digits = 30);

struct CoefficientExport {
  SeriesCoefficients coefficients;
  std::string source = "symbolic";  // or "matrix-oracle"
  // Optional per-order open-line deficits, aligned with coefficients.terms.
  std::vector<std::optional<Rational>> deficits;
  bool decimal = false;
};

// Columns: observable,topology,lambda_b,L,order,power,numerator,denominator,
// imaginary,universal,source (+ q_numerator,q_denominator). With `decimal`
// the numerator/denominator pairs become single decimal columns.
void write_coefficients(std::ostream& os, const CoefficientExport& data, const ConfigEcho& echo, OutputFormat format);

// Column-oriented numeric table, e.g. t,value or j,log_bj.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& os, const Table& table, const ConfigEcho& echo, OutputFormat format);

}  // namespace rydberg
