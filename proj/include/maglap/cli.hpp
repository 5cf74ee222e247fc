#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maglap/bounds.hpp"
#include "maglap/discretize.hpp"
#include "maglap/field.hpp"
#include "maglap/io.hpp"
#include "maglap/parallel.hpp"
#include "maglap/spectral.hpp"
#include "maglap/verify.hpp"

namespace maglap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Bad command line or config file (exit code 2).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// --help was given; carries the formatted help text.
struct HelpRequested {
  std::string text;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string command;
  std::vector<std::string> field_specs;
  std::vector<FieldProfile> fields;
  double r0 = 1.0;
  std::vector<double> sigmas;
  std::vector<double> lambdas;
  std::size_t grid_n = kDefaultGrid;
  bool richardson = true;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path; ///< empty: stdout
  unsigned threads = 1;
  std::string dump_matrix_path;
  int dump_mode = 0;
  bool both_branches = false;
  std::string operator_name = "magnetic";
  int dimension = 0; ///< constants: 0 prints d = 1 and d = 2

  SpectralOptions spectral() const {
    SpectralOptions o;
    o.grid_n = grid_n;
    o.richardson = richardson;
    o.threads = threads;
    return o;
  }
};

inline const std::vector<std::string> &commands() {
  static const std::vector<std::string> names = {
      "spectrum", "riesz", "check-theorem", "check-classical", "threshold", "sweep", "constants"};
  return names;
}

/// `a`, `a,b,c`, or `start:stop:count` (geometric unless linear is set).
inline std::vector<double> parse_lambda_grid(const std::string &text, bool linear) {
  if (std::count(text.begin(), text.end(), ':') == 2) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
      parts.push_back(item);
    double start = 0.0, stop = 0.0;
    long count = 0;
    try {
      start = std::stod(parts.at(0));
      stop = std::stod(parts.at(1));
      count = std::stol(parts.at(2));
    } catch (const std::exception &) {
      throw UsageError("malformed Lambda range '" + text + "'");
    }
    if (count < 1)
      throw UsageError("Lambda range needs count >= 1");
    if (!linear && !(start > 0.0 && stop > 0.0))
      throw UsageError("geometric Lambda range needs positive endpoints");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) {
      if (count == 1) {
        out.push_back(start);
        break;
      }
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      if (i == count - 1)
        out.push_back(stop);
      else if (linear)
        out.push_back(start + t * (stop - start));
      else
        out.push_back(start * std::pow(stop / start, t));
    }
    return out;
  }
  try {
    return parse_number_list(text);
  } catch (const InvalidFieldError &) {
    throw UsageError("malformed Lambda list '" + text + "'");
  }
}

using ConfigMap = std::multimap<std::string, std::string>;

/// `key = value` lines under `[section]` headers; `#` starts a comment.
/// Keys are returned as `section.key`.
inline ConfigMap read_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open config file '" + path + "'");
  static const std::map<std::string, std::vector<std::string>> allowed = {
      {"field", {"spec", "r0"}},
      {"run",
       {"command", "sigma", "lambda", "lambda_scale", "grid", "threads", "operator", "d",
        "richardson", "mode"}},
      {"output", {"format", "path", "dump_matrix", "both_branches"}}};
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  ConfigMap out;
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw UsageError(path + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed.count(section))
        throw UsageError(path + ":" + std::to_string(lineno) + ": unknown section [" +
                         section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const auto &keys = allowed.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    out.emplace(section + "." + key, trim(line.substr(eq + 1)));
  }
  return out;
}

namespace detail {

inline double to_double(const std::string &s, const char *what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw UsageError(std::string("malformed ") + what + " '" + s + "'");
  }
}

inline long to_long(const std::string &s, const char *what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw UsageError(std::string("malformed ") + what + " '" + s + "'");
  }
}

inline bool to_bool(const std::string &s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on")
    return true;
  if (s == "0" || s == "false" || s == "no" || s == "off")
    return false;
  throw UsageError("malformed boolean '" + s + "'");
}

} // namespace detail

/// Parses argv into a validated RunConfig. Throws UsageError on any problem
/// and HelpRequested for --help.
inline RunConfig parse_args(int argc, const char *const *argv) {
  CLI::App app{"Eigenvalue-moment bounds for the magnetic Dirichlet Laplacian on a disk",
               "maglap"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::string> field_specs;
  std::string r0_s, sigma_s, lambda_s, scale_s, grid_s, format_s, output_s, threads_s;
  std::string config_path, dump_s, mode_s, operator_s, d_s;
  bool both = false, no_richardson = false;

  app.add_option("--field", field_specs,
                 "field spec: constant:B0 | power:c,p | blowup:c,gamma | table:path.csv");
  app.add_option("--r0", r0_s, "disk radius (default 1)");
  app.add_option("--sigma", sigma_s, "Riesz exponent(s), comma separated");
  app.add_option("--lambda", lambda_s, "Lambda value, list a,b,c, or range start:stop:count");
  app.add_option("--lambda-scale", scale_s, "spacing of Lambda ranges: geometric | linear");
  app.add_option("--grid", grid_s, "radial grid size N (default 4096)");
  app.add_option("--format", format_s, "output format: csv | json");
  app.add_option("--output,-o", output_s, "output file (default stdout)");
  app.add_option("--threads", threads_s, "worker threads (MAGLAP_THREADS overrides)");
  app.add_option("--config", config_path, "key = value config file with [field] [run] [output]");
  app.add_option("--dump-matrix", dump_s, "write the discretized h_m as CSV to this path");
  app.add_option("--mode", mode_s, "angular mode for --dump-matrix (default 0)");
  app.add_option("--operator", operator_s, "magnetic | outer | inner | l | ltilde");
  app.add_option("--d", d_s, "dimension for constants (1 or 2)");
  app.add_flag("--both-branches", both, "report both integer and non-integer displays");
  app.add_flag("--no-richardson", no_richardson, "report raw N-grid eigenvalues");

  static const std::vector<std::string> blurbs = {
      "eigenvalues below Lambda, per angular mode",
      "Riesz means tr(Lambda - H)_+^sigma",
      "moment inequality with itemized right-hand side",
      "Berezin, diamagnetic and form bounds",
      "ground-state lower bound for flux F < 1",
      "check-theorem over several fields and sigmas",
      "semiclassical constants L^cl_{sigma,d}"};
  std::vector<CLI::App *> subs;
  for (std::size_t i = 0; i < commands().size(); ++i)
    subs.push_back(app.add_subcommand(commands()[i], blurbs[i]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError &e) {
    throw UsageError(e.what());
  }

  ConfigMap cfg;
  if (!config_path.empty())
    cfg = read_config_file(config_path);
  // CLI wins over the config file.
  auto pick = [&](const std::string &cli, const char *key) -> std::optional<std::string> {
    if (!cli.empty())
      return cli;
    const auto it = cfg.find(key);
    if (it == cfg.end())
      return std::nullopt;
    return it->second;
  };

  RunConfig c;
  for (auto *s : subs)
    if (s->parsed())
      c.command = s->get_name();
  if (c.command.empty())
    if (auto v = pick("", "run.command"))
      c.command = *v;
  if (c.command.empty())
    throw UsageError("no command given; expected one of spectrum, riesz, check-theorem, "
                     "check-classical, threshold, sweep, constants");
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
    throw UsageError("unknown command '" + c.command + "'");

  if (auto v = pick(r0_s, "field.r0"))
    c.r0 = detail::to_double(*v, "r0");
  if (!(c.r0 > 0.0) || !std::isfinite(c.r0))
    throw UsageError("r0 must be positive");

  if (!field_specs.empty()) {
    c.field_specs = field_specs;
  } else {
    auto [b, e] = cfg.equal_range("field.spec");
    for (auto it = b; it != e; ++it)
      c.field_specs.push_back(it->second);
  }

  if (auto v = pick(sigma_s, "run.sigma")) {
    try {
      c.sigmas = parse_number_list(*v);
    } catch (const InvalidFieldError &) {
      throw UsageError("malformed sigma list '" + *v + "'");
    }
  }
  bool linear = false;
  if (auto v = pick(scale_s, "run.lambda_scale")) {
    if (*v == "linear")
      linear = true;
    else if (*v != "geometric")
      throw UsageError("lambda scale must be geometric or linear");
  }
  if (auto v = pick(lambda_s, "run.lambda"))
    c.lambdas = parse_lambda_grid(*v, linear);
  if (auto v = pick(grid_s, "run.grid")) {
    const long n = detail::to_long(*v, "grid");
    if (n < static_cast<long>(kMinGrid))
      throw UsageError("grid must be >= 16");
    c.grid_n = static_cast<std::size_t>(n);
  }
  if (auto v = pick(threads_s, "run.threads")) {
    const long t = detail::to_long(*v, "threads");
    if (t < 1)
      throw UsageError("threads must be >= 1");
    c.threads = static_cast<unsigned>(t);
  }
  c.threads = resolve_threads(c.threads);
  if (auto v = pick(format_s, "output.format")) {
    if (*v == "csv")
      c.format = OutputFormat::Csv;
    else if (*v == "json")
      c.format = OutputFormat::Json;
    else
      throw UsageError("format must be csv or json");
  }
  if (auto v = pick(output_s, "output.path"))
    c.output_path = *v;
  if (auto v = pick(dump_s, "output.dump_matrix"))
    c.dump_matrix_path = *v;
  if (auto v = pick(mode_s, "run.mode"))
    c.dump_mode = static_cast<int>(detail::to_long(*v, "mode"));
  if (both) {
    c.both_branches = true;
  } else if (auto v = pick("", "output.both_branches")) {
    c.both_branches = detail::to_bool(*v);
  }
  if (no_richardson) {
    c.richardson = false;
  } else if (auto v = pick("", "run.richardson")) {
    c.richardson = detail::to_bool(*v);
  }
  if (auto v = pick(operator_s, "run.operator")) {
    static const std::vector<std::string> ops = {"magnetic", "outer", "inner", "l", "ltilde"};
    if (std::find(ops.begin(), ops.end(), *v) == ops.end())
      throw UsageError("unknown operator '" + *v + "'");
    c.operator_name = *v;
  }
  if (auto v = pick(d_s, "run.d")) {
    c.dimension = static_cast<int>(detail::to_long(*v, "d"));
    if (c.dimension != 1 && c.dimension != 2)
      throw UsageError("d must be 1 or 2");
  }

  for (double s : c.sigmas)
    if (!(s >= 0.0) || !std::isfinite(s))
      throw UsageError("sigma must be >= 0");
  for (double l : c.lambdas)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw UsageError("Lambda must be >= 0");

  // Per-command requirements.
  if (c.command == "constants") {
    if (c.sigmas.empty())
      c.sigmas = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
    return c;
  }
  if (c.field_specs.empty())
    throw UsageError("--field is required");
  if (c.field_specs.size() > 1 && c.command != "sweep")
    throw UsageError("only sweep accepts several fields");
  for (const auto &spec : c.field_specs) {
    try {
      c.fields.push_back(parse_field_spec(spec, c.r0));
    } catch (const std::exception &e) {
      throw UsageError("bad field spec '" + spec + "': " + e.what());
    }
    if (!c.fields.back().finite_flux())
      throw UsageError("field '" + spec + "' has infinite total flux");
  }
  const bool needs_sigma = c.command != "spectrum" && c.command != "threshold";
  const bool needs_lambda = c.command != "threshold";
  if (needs_sigma && c.sigmas.empty())
    throw UsageError("--sigma is required");
  if (needs_lambda && c.lambdas.empty())
    throw UsageError("--lambda is required");
  if (c.command == "spectrum" && c.lambdas.size() != 1)
    throw UsageError("spectrum takes a single Lambda");
  if (c.command == "check-theorem" || c.command == "sweep")
    for (double s : c.sigmas)
      if (s < 1.5)
        throw UsageError("the moment inequality needs sigma >= 3/2");
  if (c.command == "threshold" && !(c.fields.front().total_flux().value < 1.0))
    throw UsageError("threshold needs total flux F < 1");
  return c;
}

namespace detail {

inline int exit_code(const std::vector<BoundReport> &reports) {
  int code = kExitOk;
  for (const auto &r : reports) {
    if (r.verdict == Verdict::Violated)
      return kExitViolated;
    if (r.verdict == Verdict::HoldsWithinError)
      code = kExitFailure;
  }
  return code;
}

inline double riesz_for(const RunConfig &c, double sigma, double lambda,
                        const DiskSpectrum &spec) {
  if (c.operator_name == "l" || c.operator_name == "ltilde")
    return mode_trace(spec, 0, lambda, sigma).value;
  return trace(spec, lambda, sigma).value;
}

} // namespace detail

/// Executes a parsed configuration, writing the report to `out`.
/// Returns 0 when every verdict holds, 1 on a violation, 3 on a numerical failure.
inline int run(const RunConfig &c, std::ostream &out) {
  const auto opt = c.spectral();
  const bool csv = c.format == OutputFormat::Csv;

  if (!c.dump_matrix_path.empty() && !c.fields.empty()) {
    std::ofstream dump(c.dump_matrix_path);
    if (!dump)
      throw std::runtime_error("cannot write " + c.dump_matrix_path);
    write_matrix_csv(discretize(magnetic_mode(c.dump_mode, c.fields.front()), c.grid_n), dump);
  }

  if (c.command == "constants") {
    std::vector<int> dims = c.dimension ? std::vector<int>{c.dimension} : std::vector<int>{1, 2};
    json rows = json::array();
    if (csv)
      out << "sigma,d,constant\n";
    for (double s : c.sigmas)
      for (int d : dims) {
        const double v = semiclassical_constant(s, d);
        if (csv)
          out << format_double(s) << ',' << d << ',' << format_double(v) << '\n';
        else
          rows.push_back({{"sigma", s}, {"d", d}, {"constant", v}});
      }
    if (!csv)
      out << rows.dump(2) << '\n';
    return kExitOk;
  }

  const FieldProfile &field = c.fields.front();

  if (c.command == "spectrum") {
    const double lambda = c.lambdas.front();
    DiskSpectrum s;
    if (c.operator_name == "magnetic")
      s = magnetic_spectrum(field, lambda, opt);
    else
      s = auxiliary_spectrum(field,
                             (c.operator_name == "outer" || c.operator_name == "l")
                                 ? AuxSide::Outer
                                 : AuxSide::Inner,
                             lambda, opt);
    if (c.operator_name == "l" || c.operator_name == "ltilde")
      s.modes.resize(std::min<std::size_t>(s.modes.size(), 1)), s.symmetric = false;
    if (csv) {
      write_spectrum_csv(s, out);
    } else {
      json j = to_json(s);
      j["field"] = field.describe();
      j["r0"] = field.r0();
      out << j.dump(2) << '\n';
    }
    return kExitOk;
  }

  if (c.command == "riesz") {
    const double lambda_max = *std::max_element(c.lambdas.begin(), c.lambdas.end());
    DiskSpectrum s;
    if (c.operator_name == "magnetic")
      s = magnetic_spectrum(field, lambda_max, opt);
    else
      s = auxiliary_spectrum(field,
                             (c.operator_name == "outer" || c.operator_name == "l")
                                 ? AuxSide::Outer
                                 : AuxSide::Inner,
                             lambda_max, opt);
    json rows = json::array();
    if (csv)
      out << "sigma,lambda,riesz\n";
    for (double sigma : c.sigmas)
      for (double lambda : c.lambdas) {
        const double v = detail::riesz_for(c, sigma, lambda, s);
        if (csv)
          out << format_double(sigma) << ',' << format_double(lambda) << ','
              << format_double(v) << '\n';
        else
          rows.push_back({{"operator", c.operator_name},
                          {"sigma", sigma},
                          {"lambda", lambda},
                          {"riesz", v}});
      }
    if (!csv)
      out << rows.dump(2) << '\n';
    return kExitOk;
  }

  if (c.command == "check-theorem") {
    std::vector<BoundReport> all;
    for (double sigma : c.sigmas) {
      auto reports = check_theorem(field, sigma, c.lambdas, opt);
      all.insert(all.end(), reports.begin(), reports.end());
    }
    if (csv) {
      out << kReportCsvHeader << '\n';
      for (const auto &r : all)
        write_report_rows(r, out, c.both_branches);
    } else {
      json rows = json::array();
      for (const auto &r : all)
        rows.push_back(to_json(r));
      out << rows.dump(2) << '\n';
    }
    return detail::exit_code(all);
  }

  if (c.command == "sweep") {
    struct Point {
      std::size_t field;
      double sigma;
    };
    std::vector<Point> points;
    for (std::size_t f = 0; f < c.fields.size(); ++f)
      for (double sigma : c.sigmas)
        points.push_back({f, sigma});
    std::vector<std::vector<BoundReport>> results(points.size());
    SpectralOptions inner = opt;
    inner.threads = 1;
    parallel_for(points.size(), c.threads, [&](std::size_t i) {
      results[i] = check_theorem(c.fields[points[i].field], points[i].sigma, c.lambdas, inner);
    });
    std::vector<BoundReport> all;
    for (const auto &r : results)
      all.insert(all.end(), r.begin(), r.end());
    if (csv) {
      out << "field," << kReportCsvHeader << '\n';
      for (const auto &r : all)
        write_report_rows(r, out, c.both_branches, r.field + ',');
    } else {
      json rows = json::array();
      for (const auto &r : all)
        rows.push_back(to_json(r));
      out << rows.dump(2) << '\n';
    }
    return detail::exit_code(all);
  }

  if (c.command == "check-classical") {
    std::vector<ClassicalReport> all;
    for (double sigma : c.sigmas)
      for (double lambda : c.lambdas)
        all.push_back(check_classical(field, sigma, lambda, opt));
    bool ok = true;
    if (csv)
      out << kClassicalCsvHeader << '\n';
    json rows = json::array();
    for (const auto &r : all) {
      ok = ok && r.all_hold();
      if (csv)
        write_classical_row(r, out);
      else
        rows.push_back(to_json(r));
    }
    if (!csv)
      out << rows.dump(2) << '\n';
    return ok ? kExitOk : kExitViolated;
  }

  if (c.command == "threshold") {
    const auto r = threshold_bound(field, opt);
    if (csv) {
      out << kThresholdCsvHeader << '\n';
      write_threshold_row(r, out);
    } else {
      out << to_json(r).dump(2) << '\n';
    }
    return r.holds ? kExitOk : kExitViolated;
  }
  throw UsageError("unknown command '" + c.command + "'");
}

/// Full entry point: parse, run, map errors to exit codes.
inline int main(int argc, const char *const *argv, std::ostream &out = std::cout,
                std::ostream &err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const HelpRequested &h) {
    out << h.text;
    return kExitOk;
  } catch (const UsageError &e) {
    err << "maglap: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    if (cfg.output_path.empty())
      return run(cfg, out);
    std::ostringstream buffer;
    const int code = run(cfg, buffer);
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) {
      err << "maglap: cannot write " << cfg.output_path << '\n';
      return kExitFailure;
    }
    file << buffer.str();
    return code;
  } catch (const UsageError &e) {
    err << "maglap: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "maglap: " << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace maglap::cli
