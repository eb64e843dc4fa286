// rydberg: command-line front end for the series, dynamics and bounds
// libraries. Subcommands: coeffs, simulate, window, bounds, verify.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydberg/acceptance.hpp"
#include "rydberg/bounds.hpp"
#include "rydberg/dynamics.hpp"
#include "rydberg/io.hpp"
#include "rydberg/series.hpp"

namespace {

using namespace rydberg;

struct RunConfig {
  std::string command;
  std::vector<std::string> topologies{"ring"};
  int sites = 10;
  int lambda = 1;
  std::string observable = "density";
  int distance = 2;
  int site = 1;
  std::string word;
  int jmax = 5;
  std::string source = "symbolic";
  bool emit_q = false;
  bool decimal = false;
  double t_start = 0;
  double t_stop = 2;
  int steps = 201;
  int overlay = 0;
  std::vector<double> stats_window;
  int second_sites = 12;
  double epsilon = 1e-3;
  std::string kind = "kappa";
  std::string bound_class = "density";
  int ell = 1;
  int a_max = 100;
  int l_min = 5;
  int l_max = 20;
  double time = 1;
  std::vector<int> only;
  std::string output;
  std::string format = "csv";
};

class ExitError : public std::runtime_error {
 public:
  ExitError(const std::string& what, int code) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

ModelSpec model_for(const std::string& topology, const RunConfig& c) {
  switch (parse_topology(topology)) {
    case Topology::kRing:
      return ModelSpec::ring(c.sites, c.lambda);
    case Topology::kLine:
      return ModelSpec::line(c.sites, c.lambda);
    case Topology::kInfiniteLine:
      return ModelSpec::infinite_line(c.lambda);
  }
  throw std::logic_error("unhandled topology");
}

ObservableSpec observable_for(const RunConfig& c) {
  if (c.observable == "density") return ObservableSpec::density();
  if (c.observable == "local") return ObservableSpec::local_number(c.site);
  if (c.observable == "correlation") return ObservableSpec::correlation(c.distance);
  if (c.observable == "word") return ObservableSpec::general_word(parse_word(c.word));
  throw std::invalid_argument("unknown observable '" + c.observable + "'");
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

template <typename T>
std::string join_numbers(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(static_cast<double>(v[i]));
  return s;
}

ConfigEcho base_echo(const RunConfig& c) {
  ConfigEcho echo{{"command", c.command}, {"topology", join(c.topologies)}};
  const bool finite = std::any_of(c.topologies.begin(), c.topologies.end(),
                                  [](const std::string& t) { return parse_topology(t) != Topology::kInfiniteLine; });
  if (finite) echo.emplace_back("L", std::to_string(c.sites));
  echo.emplace_back("lambda", std::to_string(c.lambda));
  return echo;
}

void add_observable_echo(ConfigEcho& echo, const RunConfig& c) {
  echo.emplace_back("observable", c.observable);
  if (c.observable == "correlation" || c.observable == "g2") echo.emplace_back("d", std::to_string(c.distance));
  if (c.observable == "local" || c.observable == "g2") echo.emplace_back("site", std::to_string(c.site));
  if (c.observable == "word") echo.emplace_back("word", c.word);
}

void add_grid_echo(ConfigEcho& echo, const RunConfig& c) {
  echo.emplace_back("t-start", format_double(c.t_start));
  echo.emplace_back("t-stop", format_double(c.t_stop));
  echo.emplace_back("steps", std::to_string(c.steps));
}

// Writes to --output or stdout.
template <typename Fn>
void emit(const RunConfig& c, Fn&& write) {
  if (c.output.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw std::runtime_error("cannot open output file " + c.output);
  write(out);
}

// ---------------------------------------------------------------------------

bool same_series(const SeriesCoefficients& a, const SeriesCoefficients& b, std::string& detail) {
  if (a.terms.size() != b.terms.size()) {
    detail = "order counts differ";
    return false;
  }
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].value != b.terms[i].value || a.terms[i].imaginary != b.terms[i].imaginary) {
      detail = "order " + std::to_string(a.terms[i].order) + ": symbolic " + a.terms[i].value.get_str() +
               ", oracle " + b.terms[i].value.get_str();
      return false;
    }
  }
  return true;
}

int cmd_coeffs(const RunConfig& c) {
  if (c.topologies.size() != 1) throw std::invalid_argument("coeffs takes a single topology");
  const ModelSpec model = model_for(c.topologies.front(), c);
  const ObservableSpec observable = observable_for(c);

  CoefficientExport data;
  data.decimal = c.decimal;
  if (c.source == "symbolic") {
    data.coefficients = observable_coefficients(model, observable, c.jmax);
  } else if (c.source == "oracle" || c.source == "both") {
    const SeriesCoefficients oracle = model.is_finite()
                                          ? taylor_oracle(model, observable, c.jmax).coefficients
                                          : universal_coefficients_via_oracle(observable, c.lambda, c.jmax);
    data.coefficients = oracle;
    data.source = "matrix-oracle";
    if (c.source == "both") {
      const SeriesCoefficients symbolic = observable_coefficients(model, observable, c.jmax);
      std::string detail;
      if (!same_series(symbolic, oracle, detail)) throw ExitError("symbolic and oracle coefficients differ: " + detail, 2);
      data.coefficients = symbolic;
      data.source = "symbolic=matrix-oracle";
    }
  } else {
    throw std::invalid_argument("unknown source '" + c.source + "' (symbolic, oracle, both)");
  }

  if (c.emit_q) {
    if (model.topology != Topology::kLine || observable.kind != ObservableSpec::Kind::kDensityPerSite) {
      throw std::invalid_argument("--emit-q needs the density on a line");
    }
    data.deficits = boundary_deficit_q(c.jmax, c.sites, c.lambda);
  }

  ConfigEcho echo = base_echo(c);
  add_observable_echo(echo, c);
  echo.emplace_back("jmax", std::to_string(c.jmax));
  echo.emplace_back("source", c.source);
  echo.emplace_back("emit-q", c.emit_q ? "true" : "false");
  echo.emplace_back("decimal", c.decimal ? "true" : "false");
  emit(c, [&](std::ostream& os) { write_coefficients(os, data, echo, parse_output_format(c.format)); });
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& c) {
  const std::vector<double> times = time_grid(c.t_start, c.t_stop, c.steps);
  Table table;
  table.headers.push_back("t");
  std::vector<std::vector<double>> columns;
  std::vector<std::string> notes;

  for (const std::string& topology : c.topologies) {
    const ModelSpec model = model_for(topology, c);
    if (!model.is_finite()) throw std::invalid_argument("simulate needs a finite lattice");
    std::vector<double> values;
    if (c.observable == "g2") {
      G2Result r = g2(model, c.distance, times, c.site);
      values = std::move(r.ratio.values);
      if (!r.undefined.empty()) {
        notes.push_back(topology + ": g2 undefined at " + std::to_string(r.undefined.size()) + " points");
      }
    } else {
      values = evolve(model, observable_for(c), times).values;
    }
    if (c.stats_window.size() == 2) {
      EvolutionResult tmp;
      tmp.times = times;
      tmp.values = values;
      const WindowStatistics s = window_statistics(tmp, c.stats_window[0], c.stats_window[1]);
      notes.push_back(topology + ": mean " + format_double(s.mean) + ", variance " + format_double(s.variance) +
                      " over " + std::to_string(s.samples) + " samples");
    }
    table.headers.push_back(topology);
    columns.push_back(std::move(values));
  }

  if (c.overlay > 0) {
    if (c.observable == "g2") throw std::invalid_argument("no universal overlay for g2");
    const SeriesCoefficients universal = universal_coefficients_via_oracle(observable_for(c), c.lambda, c.overlay);
    std::vector<double> values;
    for (double t : times) values.push_back(eval_series(universal, t, c.overlay));
    table.headers.push_back("universal_j" + std::to_string(c.overlay));
    columns.push_back(std::move(values));
  }

  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (const auto& col : columns) row.push_back(col[i]);
    table.rows.push_back(std::move(row));
  }

  ConfigEcho echo = base_echo(c);
  add_observable_echo(echo, c);
  add_grid_echo(echo, c);
  echo.emplace_back("overlay", std::to_string(c.overlay));
  if (c.stats_window.size() == 2) echo.emplace_back("stats", join_numbers(c.stats_window));
  for (std::size_t i = 0; i < notes.size(); ++i) echo.emplace_back("note" + std::to_string(i + 1), notes[i]);
  emit(c, [&](std::ostream& os) { write_table(os, table, echo, parse_output_format(c.format)); });
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_window(const RunConfig& c) {
  if (c.topologies.size() != 1) throw std::invalid_argument("window takes a single topology");
  const ModelSpec a = model_for(c.topologies.front(), c);
  RunConfig second = c;
  second.sites = c.second_sites;
  const ModelSpec b = model_for(c.topologies.front(), second);
  const std::vector<double> times = time_grid(c.t_start, c.t_stop, c.steps);
  const auto first = universal_window(a, b, observable_for(c), c.epsilon, times);

  Table table{{"L", "L2", "epsilon", "t_exceed"},
              {{static_cast<double>(c.sites), static_cast<double>(c.second_sites), c.epsilon,
                first ? *first : INFINITY}}};
  ConfigEcho echo = base_echo(c);
  echo.emplace_back("L2", std::to_string(c.second_sites));
  add_observable_echo(echo, c);
  add_grid_echo(echo, c);
  echo.emplace_back("epsilon", format_double(c.epsilon));
  emit(c, [&](std::ostream& os) { write_table(os, table, echo, parse_output_format(c.format)); });
  return 0;
}

// ---------------------------------------------------------------------------

BoundClass parse_bound_class(const std::string& name) {
  if (name == "density") return BoundClass::kDensity;
  if (name == "word") return BoundClass::kWord;
  throw std::invalid_argument("unknown bound class '" + name + "' (density, word)");
}

int cmd_bounds(const RunConfig& c) {
  Table table;
  ConfigEcho echo{{"command", c.command}, {"kind", c.kind}};
  const BoundClass cls = parse_bound_class(c.bound_class);
  if (c.kind == "kappa") {
    table.headers = {"a", "tau", "log_kappa", "omega"};
    for (int a = 1; a <= c.a_max; ++a) {
      const KappaValue k = kappa(a);
      table.rows.push_back({static_cast<double>(a), k.tau, k.log_kappa, k.omega});
    }
    echo.emplace_back("a-max", std::to_string(c.a_max));
  } else if (c.kind == "coefficients") {
    table.headers = {"j", "log_bj"};
    for (int j = 1; j <= c.jmax; ++j) {
      table.rows.push_back({static_cast<double>(j), log_coefficient_bound(j, c.lambda, c.ell, cls)});
    }
    echo.insert(echo.end(), {{"class", c.bound_class}, {"lambda", std::to_string(c.lambda)},
                             {"ell", std::to_string(c.ell)}, {"jmax", std::to_string(c.jmax)}});
  } else if (c.kind == "envelope") {
    table.headers = {"t", "E", "log_E"};
    const EnvelopeSpec spec{cls, c.sites, c.lambda, c.ell, 0};
    for (double t : time_grid(c.t_start, c.t_stop, c.steps)) {
      const EnvelopeValue e = error_envelope(spec, t);
      table.rows.push_back({t, e.value, e.log_value});
    }
    echo.insert(echo.end(), {{"class", c.bound_class}, {"L", std::to_string(c.sites)},
                             {"lambda", std::to_string(c.lambda)}, {"ell", std::to_string(c.ell)},
                             {"first-order", std::to_string(first_uncertified_order(spec))}});
    add_grid_echo(echo, c);
  } else if (c.kind == "ratio") {
    // Consecutive word envelopes E^(L+2 lambda)/E^(L) against both rate formulas.
    table.headers = {"L", "measured", "asymptotic", "rigorous"};
    for (int L = c.l_min; L <= c.l_max; ++L) {
      const EnvelopeSpec lo{cls, L, c.lambda, c.ell, 0};
      EnvelopeSpec hi = lo;
      hi.sites = L + (cls == BoundClass::kDensity ? c.lambda : 2 * c.lambda);
      const double measured = std::exp(error_envelope(hi, c.time).log_value - error_envelope(lo, c.time).log_value);
      table.rows.push_back({static_cast<double>(L), measured, convergence_ratio(L, c.lambda, c.ell, c.time),
                            rigorous_convergence_ratio(L, c.lambda, c.ell, c.time)});
    }
    echo.insert(echo.end(), {{"class", c.bound_class}, {"lambda", std::to_string(c.lambda)},
                             {"ell", std::to_string(c.ell)}, {"L-min", std::to_string(c.l_min)},
                             {"L-max", std::to_string(c.l_max)}, {"time", format_double(c.time)}});
  } else {
    throw std::invalid_argument("unknown bounds kind '" + c.kind + "' (kappa, coefficients, envelope, ratio)");
  }
  emit(c, [&](std::ostream& os) { write_table(os, table, echo, parse_output_format(c.format)); });
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& c) {
  AcceptanceOptions options;
  options.only = c.only;
  const auto results = run_acceptance(options, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  if (failed == 0) {
    std::cout << "verify: all " << results.size() << " criteria passed" << std::endl;
    return 0;
  }
  const bool documented = only_unattainable_failures(results);
  std::cout << "verify: " << failed << " of " << results.size() << " criteria failed"
            << (documented ? " (unattainable sub-checks only)" : "") << std::endl;
  return documented ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Config files: "key = value" lines mirroring the long flag names; '#'
// starts a comment. Flags given on the command line take precedence.

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

const std::vector<std::string> kCommands = {"coeffs", "simulate", "window", "bounds", "verify"};

// Expands --config into explicit flags placed before the command-line ones.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  auto config = read_config(path);

  std::size_t command_at = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (std::find(kCommands.begin(), kCommands.end(), args[i]) != kCommands.end()) {
      command_at = i;
      break;
    }
  }
  if (command_at == 0) {
    auto it = config.find("command");
    if (it == config.end()) throw std::runtime_error("no subcommand given on the command line or in " + path);
    args.insert(args.begin() + 1, it->second);
    command_at = 1;
  }
  config.erase("command");

  std::vector<std::string> injected;
  for (const auto& [key, value] : config) {
    const std::string flag = "--" + key;
    bool overridden = false;
    for (const auto& a : args) overridden |= a == flag || a.rfind(flag + "=", 0) == 0;
    if (overridden) continue;
    if (value == "true") {
      injected.push_back(flag);
    } else if (value != "false") {
      injected.push_back(flag);
      injected.push_back(value);
    }
  }
  args.insert(args.begin() + static_cast<long>(command_at) + 1, injected.begin(), injected.end());
  return args;
}

void add_model_options(CLI::App* sub, RunConfig& c, bool multi_topology) {
  if (multi_topology) {
    sub->add_option("--topology", c.topologies, "ring, line or infinite (comma separated for several columns)")
        ->delimiter(',')
        ->capture_default_str();
  } else {
    sub->add_option("--topology", c.topologies, "ring, line or infinite")->expected(1)->capture_default_str();
  }
  sub->add_option("--L", c.sites, "lattice size")->capture_default_str();
  sub->add_option("--lambda", c.lambda, "blockade range lambda_b")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_observable_options(CLI::App* sub, RunConfig& c, const std::string& choices) {
  sub->add_option("--observable", c.observable, choices)->capture_default_str();
  sub->add_option("--d", c.distance, "correlation distance")->capture_default_str();
  sub->add_option("--site", c.site, "site of a local observable")->capture_default_str();
  sub->add_option("--word", c.word, "word such as \"1:r 2:m\"");
}

void add_output_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--output,-o", c.output, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->capture_default_str();
}

void add_grid_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--t-start", c.t_start, "first time")->capture_default_str();
  sub->add_option("--t-stop", c.t_stop, "last time")->capture_default_str();
  sub->add_option("--steps", c.steps, "number of grid points")->capture_default_str();
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  args = expand_config(std::move(args));

  RunConfig c;
  CLI::App app{"Universal short-time dynamics of perfect-blockade Rydberg lattices"};
  app.require_subcommand(1);
  app.add_option("--config", "key = value file mirroring the long flags");

  CLI::App* coeffs = app.add_subcommand("coeffs", "exact Taylor coefficients");
  add_model_options(coeffs, c, false);
  add_observable_options(coeffs, c, "density, local, correlation or word");
  coeffs->add_option("--jmax", c.jmax, "highest order")->capture_default_str();
  coeffs->add_option("--source", c.source, "symbolic, oracle or both")->capture_default_str();
  coeffs->add_flag("--emit-q", c.emit_q, "add open-line deficits q_j");
  coeffs->add_flag("--decimal", c.decimal, "decimal expansions instead of num/den");
  add_output_options(coeffs, c);

  CLI::App* simulate = app.add_subcommand("simulate", "exact time evolution from the vacuum");
  add_model_options(simulate, c, true);
  add_observable_options(simulate, c, "density, local, correlation, word or g2");
  add_grid_options(simulate, c);
  simulate->add_option("--overlay", c.overlay, "add the universal series truncated at this order")
      ->capture_default_str();
  simulate->add_option("--stats", c.stats_window, "mean and variance over [t0, t1]")->expected(2)->delimiter(',');
  add_output_options(simulate, c);

  CLI::App* window = app.add_subcommand("window", "first time two lattice sizes differ by more than epsilon");
  add_model_options(window, c, false);
  add_observable_options(window, c, "density, local, correlation or word");
  add_grid_options(window, c);
  window->add_option("--L2", c.second_sites, "second lattice size")->capture_default_str();
  window->add_option("--epsilon", c.epsilon, "deviation threshold")->capture_default_str();
  add_output_options(window, c);

  CLI::App* bounds = app.add_subcommand("bounds", "kappa tables, coefficient bounds, envelopes, rates");
  bounds->add_option("--kind", c.kind, "kappa, coefficients, envelope or ratio")->capture_default_str();
  bounds->add_option("--class", c.bound_class, "density or word")->capture_default_str();
  bounds->add_option("--L", c.sites, "lattice size for envelopes")->capture_default_str();
  bounds->add_option("--lambda", c.lambda, "blockade range")->capture_default_str();
  bounds->add_option("--ell", c.ell, "word length")->capture_default_str();
  bounds->add_option("--jmax", c.jmax, "highest order for coefficient bounds")->capture_default_str();
  bounds->add_option("--a-max", c.a_max, "largest a in the kappa table")->capture_default_str();
  bounds->add_option("--L-min", c.l_min, "first L of the ratio table")->capture_default_str();
  bounds->add_option("--L-max", c.l_max, "last L of the ratio table")->capture_default_str();
  bounds->add_option("--time", c.time, "time for the ratio table")->capture_default_str();
  add_grid_options(bounds, c);
  add_output_options(bounds, c);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", c.only, "criteria to run (1-8)")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  c.command = app.get_subcommands().front()->get_name();
  if (c.command == "coeffs") return cmd_coeffs(c);
  if (c.command == "simulate") return cmd_simulate(c);
  if (c.command == "window") return cmd_window(c);
  if (c.command == "bounds") return cmd_bounds(c);
  return cmd_verify(c);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
