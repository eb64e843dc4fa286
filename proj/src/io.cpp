#include "rydberg/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace rydberg {

namespace {

using nlohmann::ordered_json;

void write_echo(std::ostream& os, const ConfigEcho& echo) {
  for (const auto& [key, value] : echo) os << "# " << key << " = " << value << '\n';
}

ordered_json echo_json(const ConfigEcho& echo) {
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : echo) config[key] = value;
  return config;
}

std::string lattice_size(const ModelSpec& model) { return model.is_finite() ? std::to_string(model.sites) : "inf"; }

ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);  // JSON has no inf/nan literals
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown output format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, end);
}

std::string decimal_string(const Rational& q, int digits) {
  if (sgn(q) == 0) return "0";
  mpf_class f(q, 64 + static_cast<mp_bitcnt_t>(digits * 4));
  mp_exp_t exponent = 0;
  std::string mantissa = f.get_str(exponent, 10, static_cast<std::size_t>(digits));
  std::string sign;
  if (mantissa[0] == '-') {
    sign = "-";
    mantissa.erase(0, 1);
  }
  std::string out = sign + mantissa.substr(0, 1);
  if (mantissa.size() > 1) out += "." + mantissa.substr(1);
  if (exponent - 1 != 0) out += "e" + std::to_string(exponent - 1);
  return out;
}

void write_coefficients(std::ostream& os, const CoefficientExport& data, const ConfigEcho& echo,
                        OutputFormat format) {
  const SeriesCoefficients& c = data.coefficients;
  const bool with_q = !data.deficits.empty();
  if (with_q && data.deficits.size() != c.terms.size()) {
    throw std::invalid_argument("deficits must align with the coefficient orders");
  }
  const std::string observable = c.observable.describe();
  const std::string topology = to_string(c.model.topology);
  const std::string size = lattice_size(c.model);

  if (format == OutputFormat::kCsv) {
    write_echo(os, echo);
    os << "observable,topology,lambda_b,L,order,power,";
    os << (data.decimal ? "value" : "numerator,denominator");
    os << ",imaginary,universal,source";
    if (with_q) os << (data.decimal ? ",q" : ",q_numerator,q_denominator");
    os << '\n';
    for (std::size_t i = 0; i < c.terms.size(); ++i) {
      const SeriesTerm& t = c.terms[i];
      os << '"' << observable << "\"," << topology << ',' << c.model.blockade_range << ',' << size << ',' << t.order
         << ',' << c.power(t.order) << ',';
      if (data.decimal) {
        os << decimal_string(t.value);
      } else {
        os << t.value.get_num().get_str() << ',' << t.value.get_den().get_str();
      }
      os << ',' << (t.imaginary ? "true" : "false") << ',' << (c.is_universal(t.order) ? "true" : "false") << ','
         << data.source;
      if (with_q) {
        const auto& q = data.deficits[i];
        if (!q) {
          os << (data.decimal ? "," : ",,");
        } else if (data.decimal) {
          os << ',' << decimal_string(*q);
        } else {
          os << ',' << q->get_num().get_str() << ',' << q->get_den().get_str();
        }
      }
      os << '\n';
    }
    return;
  }

  ordered_json doc;
  doc["config"] = echo_json(echo);
  doc["observable"] = observable;
  doc["topology"] = topology;
  doc["lambda_b"] = c.model.blockade_range;
  doc["L"] = size;
  doc["source"] = data.source;
  doc["layout"] = c.layout == SeriesLayout::kEvenPowers ? "t^(2j)" : "t^j";
  doc["coefficients"] = ordered_json::array();
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    const SeriesTerm& t = c.terms[i];
    ordered_json row;
    row["order"] = t.order;
    row["power"] = c.power(t.order);
    if (data.decimal) {
      row["value"] = decimal_string(t.value);
    } else {
      row["numerator"] = t.value.get_num().get_str();
      row["denominator"] = t.value.get_den().get_str();
    }
    row["imaginary"] = t.imaginary;
    row["universal"] = c.is_universal(t.order);
    if (with_q) {
      const auto& q = data.deficits[i];
      if (!q) {
        row["q"] = nullptr;
      } else {
        row["q"] = data.decimal ? decimal_string(*q) : q->get_str();
      }
    }
    doc["coefficients"].push_back(row);
  }
  os << doc.dump(2) << '\n';
}

void write_table(std::ostream& os, const Table& table, const ConfigEcho& echo, OutputFormat format) {
  for (const auto& row : table.rows) {
    if (row.size() != table.headers.size()) throw std::invalid_argument("table row width mismatch");
  }
  if (format == OutputFormat::kCsv) {
    write_echo(os, echo);
    for (std::size_t i = 0; i < table.headers.size(); ++i) os << (i ? "," : "") << table.headers[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
      os << '\n';
    }
    return;
  }
  ordered_json doc;
  doc["config"] = echo_json(echo);
  ordered_json columns = ordered_json::object();
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    ordered_json col = ordered_json::array();
    for (const auto& row : table.rows) col.push_back(json_number(row[i]));
    columns[table.headers[i]] = col;
  }
  doc["columns"] = columns;
  os << doc.dump(2) << '\n';
}

}  // namespace rydberg
