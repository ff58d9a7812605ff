#include "volterra/cli.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "volterra/asymptotics.hpp"
#include "volterra/errors.hpp"
#include "volterra/grid.hpp"
#include "volterra/kernel_spec.hpp"
#include "volterra/largedev.hpp"
#include "volterra/norms.hpp"

namespace volterra {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string subcommand;
  std::string kernel;
  std::string kernel_b;
  std::string density;
  std::string p = "2";
  std::string n = "1";
  std::size_t m = kDefaultCells;
  std::string method = "auto";
  double tol = 1e-8;
  int max_iterations = 10000;
  std::int64_t trials = 100000;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  std::string growth = "sqrt";
  int j = 0;
  double delta = 0.5;
  int degree = 0;
};

// Input error attributable to a particular flag.
class FlagError : public UsageError {
 public:
  FlagError(const std::string& flag, const std::string& what) : UsageError(flag + ": " + what) {}
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json json_num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json config_json(const RunConfig& c) {
  json j = {{"subcommand", c.subcommand}, {"m", c.m}, {"format", c.format}};
  if (!c.kernel.empty()) j["kernel"] = c.kernel;
  if (!c.kernel_b.empty()) j["kernel_b"] = c.kernel_b;
  if (!c.density.empty()) j["density"] = c.density;
  if (c.subcommand != "convpow" && c.subcommand != "largedev") j["p"] = c.p;
  j["n"] = c.n;
  if (c.subcommand == "norm" || c.subcommand == "table") {
    j["method"] = c.method;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iterations;
  }
  if (c.subcommand == "extremal") j["g"] = c.growth;
  if (c.subcommand == "decay") {
    j["j"] = c.j;
    j["delta"] = c.delta;
    j["degree"] = c.degree;
  }
  if (c.subcommand == "largedev") {
    j["trials"] = c.trials;
    j["seed"] = c.seed;
  }
  return j;
}

json envelope(const RunConfig& c) { return {{"version", "1"}, {"config", config_json(c)}}; }

Kernel kernel_from_flag(const std::string& text, const std::string& flag) {
  if (text.empty()) throw FlagError(flag, "a kernel spec is required");
  try {
    return parse_kernel_spec(text);
  } catch (const SpecParseError& e) {
    throw FlagError(flag, e.what());
  } catch (const DomainError& e) {
    throw FlagError(flag, e.what());
  }
}

SmoothFactorKernel as_smooth_factor(const Kernel& k) {
  if (const auto* pe = std::get_if<PowerExpKernel>(&k)) return SmoothFactorKernel::from_power_exp(*pe);
  return std::get<SmoothFactorKernel>(k);
}

HolderExponent holder_from_flag(const std::string& text) {
  try {
    return parse_holder(text);
  } catch (const std::exception& e) {
    throw FlagError("--p", e.what());
  }
}

std::vector<int> ns_from_flag(const std::string& text) {
  try {
    return parse_n_values(text);
  } catch (const std::exception& e) {
    throw FlagError("--n", e.what());
  }
}

int single_n(const std::string& text) {
  const auto ns = ns_from_flag(text);
  if (ns.size() != 1) throw FlagError("--n", "expected a single value");
  return ns.front();
}

GridSpec grid_from_flag(std::size_t m) {
  try {
    return GridSpec(m);
  } catch (const UsageError& e) {
    throw FlagError("--m", e.what());
  }
}

NormOptions options_from(const RunConfig& c) {
  NormOptions opt;
  try {
    opt.method = parse_method_choice(c.method);
  } catch (const UsageError& e) {
    throw FlagError("--method", e.what());
  }
  if (!(c.tol > 0.0)) throw FlagError("--tol", "must be positive");
  opt.tol = c.tol;
  if (c.max_iterations < 1) throw FlagError("--max-iter", "must be positive");
  opt.max_iterations = c.max_iterations;
  return opt;
}

json estimate_json(const NormEstimate& e) {
  return {{"p", e.p.label()},
          {"log_lower", json_num(e.log_lower)},
          {"log_upper", json_num(e.log_upper)},
          {"lower", json_num(std::exp(e.log_lower))},
          {"upper", json_num(std::exp(e.log_upper))},
          {"method", std::string(to_string(e.method))},
          {"iterations", e.iterations}};
}

// Rows of a generic table: header names plus numeric/string cells.
struct Table {
  std::string comment;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

void emit_table(const Table& t, const RunConfig& c, std::ostream& os) {
  if (c.format == "json") {
    json doc = envelope(c);
    doc["rows"] = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = row[i];
      doc["rows"].push_back(obj);
    }
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# " << t.comment << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const json& cell = row[i];
      if (cell.is_string()) {
        os << cell.get<std::string>();
      } else if (cell.is_number_integer()) {
        os << cell.dump();
      } else if (cell.is_number()) {
        os << num(cell.get<double>());
      }
    }
    os << '\n';
  }
}

json logcell(double x) {
  if (std::isnan(x)) return nullptr;
  return x;  // +-inf survive into CSV as "inf"/"-inf"; JSON dump maps them to null
}

void run_convpow(const RunConfig& c, std::ostream& os) {
  const Kernel k = kernel_from_flag(c.kernel, "--kernel");
  const GridSpec grid = grid_from_flag(c.m);
  const auto f = conv_power_numeric(discretize(k, grid), single_n(c.n));
  if (c.format == "json") {
    json doc = envelope(c);
    doc["log_scale"] = json_num(f.log_scale());
    json t = json::array(), mant = json::array();
    for (std::size_t j = 0; j < f.size(); ++j) {
      t.push_back(grid.midpoint(j));
      mant.push_back(f.values()[j]);
    }
    doc["t"] = t;
    doc["mantissa"] = mant;
    os << doc.dump(2) << '\n';
    return;
  }
  write_csv(os, f);
}

void run_norm(const RunConfig& c, std::ostream& os) {
  const Kernel k = kernel_from_flag(c.kernel, "--kernel");
  const auto p = holder_from_flag(c.p);
  const int n = single_n(c.n);
  const auto estimate = seeded_op_norm(k, grid_from_flag(c.m), n, p, options_from(c));
  if (c.format == "csv") {
    Table t{"log_* columns are natural logarithms", {"n", "p", "log_lower", "log_upper", "method", "iterations"}, {}};
    t.rows.push_back({n, p.label(), logcell(estimate.log_lower), logcell(estimate.log_upper),
                      std::string(to_string(estimate.method)), estimate.iterations});
    emit_table(t, c, os);
    return;
  }
  json doc = envelope(c);
  doc["result"] = estimate_json(estimate);
  os << doc.dump(2) << '\n';
}

void run_table(const RunConfig& c, std::ostream& os) {
  const Kernel k = kernel_from_flag(c.kernel, "--kernel");
  const auto p = holder_from_flag(c.p);
  const GridSpec grid = grid_from_flag(c.m);
  const auto opt = options_from(c);
  Table t{"log_* columns are natural logarithms; ratio = exp(log_norm_lower - log_asym)",
          {"n", "log_norm_lower", "log_norm_upper", "log_asym", "ratio", "method"},
          {}};
  for (int n : ns_from_flag(c.n)) {
    const auto est = seeded_op_norm(k, grid, n, p, opt);
    const auto asym = asymptotic_norm(k, n, p);
    t.rows.push_back({n, logcell(est.log_lower), logcell(est.log_upper), logcell(asym.log_value),
                      logcell(std::exp(est.log_lower - asym.log_value)), std::string(to_string(est.method))});
  }
  emit_table(t, c, os);
}

void run_extremal(const RunConfig& c, std::ostream& os) {
  const Kernel k = kernel_from_flag(c.kernel, "--kernel");
  const auto p = holder_from_flag(c.p);
  const GridSpec grid = grid_from_flag(c.m);
  GrowthChoice g;
  try {
    g = parse_growth_choice(c.growth);
  } catch (const UsageError& e) {
    throw FlagError("--g", e.what());
  }
  Table t{"log_* columns are natural logarithms; efficiency = exp(log_rayleigh - log_norm)",
          {"n", "log_rayleigh", "log_norm", "efficiency"},
          {}};
  for (int n : ns_from_flag(c.n)) {
    const auto row = extremal_efficiency(k, grid, n, p, g, options_from(c));
    t.rows.push_back({n, logcell(row.log_rayleigh), logcell(row.log_norm), logcell(row.efficiency)});
  }
  emit_table(t, c, os);
}

void run_equiv(const RunConfig& c, std::ostream& os) {
  const Kernel ka = kernel_from_flag(c.kernel, "--kernel");
  const auto p = holder_from_flag(c.p);
  const GridSpec grid = grid_from_flag(c.m);
  Kernel kb = c.kernel_b.empty() ? Kernel{tangent_kernel(as_smooth_factor(ka))} : kernel_from_flag(c.kernel_b, "--kernel-b");
  const auto trace =
      equivalence_trace(discretize(ka, grid), discretize(kb, grid), ns_from_flag(c.n), p, options_from(c));
  Table t{"log_* columns are natural logarithms; ratio = exp(log_diff - log_norm_a)",
          {"n", "log_norm_a", "log_norm_b", "log_diff", "ratio"},
          {}};
  for (const auto& row : trace) {
    t.rows.push_back({row.n, logcell(row.log_norm_a), logcell(row.log_norm_b), logcell(row.log_diff_norm),
                      logcell(row.ratio)});
  }
  emit_table(t, c, os);
}

void run_decay(const RunConfig& c, std::ostream& os) {
  const auto k = as_smooth_factor(kernel_from_flag(c.kernel, "--kernel"));
  const auto p = holder_from_flag(c.p);
  const GridSpec grid = grid_from_flag(c.m);
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw FlagError("--delta", "must lie in (0, 1)");
  if (c.degree < 0) throw FlagError("--degree", "must be nonnegative");
  Table t{"ratio = n^degree * int_0^{1-delta} k^{*(n-j)} / ||V_k^n||_p (linear)",
          {"n", "j", "delta", "degree", "ratio"},
          {}};
  for (int n : ns_from_flag(c.n)) {
    if (c.j < 0 || c.j >= n) throw FlagError("--j", "must satisfy 0 <= j < n");
    const double ratio = decay_ratio(k, grid, n, c.j, c.delta, c.degree, p, options_from(c));
    t.rows.push_back({n, c.j, c.delta, c.degree, logcell(ratio)});
  }
  emit_table(t, c, os);
}

void run_largedev(const RunConfig& c, std::ostream& os) {
  if (c.density.empty()) throw FlagError("--density", "a density spec is required");
  std::optional<DensitySpec> d;
  try {
    d = parse_density_spec(c.density);
  } catch (const UsageError& e) {
    throw FlagError("--density", e.what());
  } catch (const DomainError& e) {
    throw FlagError("--density", e.what());
  }
  if (c.trials != 0 && c.trials < 1000) throw FlagError("--trials", "must be 0 (skip Monte Carlo) or >= 1000");
  const auto report = largedev_report(*d, ns_from_flag(c.n), grid_from_flag(c.m), c.trials, c.seed);
  if (c.format == "csv") {
    write_csv(os, report);
    return;
  }
  json doc = envelope(c);
  doc["meta"] = {{"density", report.density}, {"m", report.cells}, {"trials", report.trials}, {"seed", report.seed},
                 {"log_base", "e"}};
  doc["rows"] = json::array();
  for (const auto& row : report.rows) {
    auto opt = [](const std::optional<double>& v) { return v ? json_num(*v) : json(nullptr); };
    doc["rows"].push_back({{"n", row.n},
                           {"log_p_grid", json_num(row.log_p_grid)},
                           {"log_p_oracle", opt(row.log_p_oracle)},
                           {"mc_estimate", opt(row.mc_estimate)},
                           {"mc_stderr", opt(row.mc_stderr)},
                           {"below_mc_resolution", row.below_mc_resolution},
                           {"log_p_asym", json_num(row.log_p_asymptotic)},
                           {"ratio", json_num(row.ratio_grid_over_asym)}});
  }
  os << doc.dump(2) << '\n';
}

}  // namespace

HolderExponent parse_holder(const std::string& text) {
  if (text == "inf" || text == "infinity") return HolderExponent::infinity();
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("invalid exponent '" + text + "'");
    return v;
  };
  if (slash != std::string::npos) {
    const std::string_view sv(text);
    return HolderExponent::from_ratio(parse_int(sv.substr(0, slash)), parse_int(sv.substr(slash + 1)));
  }
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    return HolderExponent::from_ratio(parse_int(text), 1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid exponent '" + text + "' (expected inf, an integer, num/den or a decimal)");
  }
  return HolderExponent::from_double(value);
}

std::vector<int> parse_n_values(const std::string& text) {
  auto parse_one = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("invalid n value '" + std::string(s) + "'");
    }
    if (v <= 0) throw UsageError("n must be positive");
    return v;
  };
  const auto dots = text.find("..");
  const bool has_comma = text.find(',') != std::string::npos;
  if (dots != std::string::npos) {
    if (has_comma) throw UsageError("mixing a..b ranges and comma lists is not allowed");
    const std::string_view sv(text);
    const int lo = parse_one(sv.substr(0, dots));
    const int hi = parse_one(sv.substr(dots + 2));
    if (hi < lo) throw UsageError("empty n range");
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::vector<int> out;
  std::string_view rest(text);
  for (;;) {
    const auto comma = rest.find(',');
    out.push_back(parse_one(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Iterated Volterra convolution operators on L^p(0,1): powers, norms and asymptotics"};
  app.require_subcommand(1);
  bool format_given = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "grid cell count (power of two >= 8)")->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option_function<std::string>(
           "--format",
           [&](const std::string& f) {
             cfg.format = f;
             format_given = true;
           },
           "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_kernel = [&](CLI::App* sub) { sub->add_option("--kernel", cfg.kernel, "kernel spec")->required(); };
  auto add_p = [&](CLI::App* sub) { sub->add_option("--p", cfg.p, "exponent: inf, integer, num/den or decimal")->capture_default_str(); };
  auto add_norm_opts = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method, "auto, exact-l1, svd, power")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "power-iteration relative tolerance")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iterations, "power-iteration cap")->capture_default_str();
  };

  auto* convpow = app.add_subcommand("convpow", "dump k^{*n} on the grid");
  add_kernel(convpow);
  convpow->add_option("--n", cfg.n, "convolution power")->required();
  add_common(convpow);

  auto* norm = app.add_subcommand("norm", "estimate ||V_k^n||_p");
  add_kernel(norm);
  norm->add_option("--n", cfg.n, "power")->capture_default_str();
  add_p(norm);
  add_norm_opts(norm);
  add_common(norm);

  auto* table = app.add_subcommand("table", "operator norm vs asymptotic formula over n");
  add_kernel(table);
  table->add_option("--n", cfg.n, "n range a..b or list")->required();
  add_p(table);
  add_norm_opts(table);
  add_common(table);

  auto* extremal = app.add_subcommand("extremal", "Rayleigh quotient of the extremal sequence vs the norm");
  add_kernel(extremal);
  extremal->add_option("--n", cfg.n, "n range a..b or list")->required();
  add_p(extremal);
  extremal->add_option("--g", cfg.growth, "growth function for p = 1: sqrt or log")->capture_default_str();
  extremal->add_option("--tol", cfg.tol, "power-iteration relative tolerance")->capture_default_str();
  add_common(extremal);

  auto* equiv = app.add_subcommand("equiv", "asymptotic-equivalence trace of V_k^n and V_h^n");
  add_kernel(equiv);
  equiv->add_option("--kernel-b", cfg.kernel_b, "second kernel (default: tangent kernel of --kernel)");
  equiv->add_option("--n", cfg.n, "n range a..b or list")->required();
  add_p(equiv);
  equiv->add_option("--tol", cfg.tol, "power-iteration relative tolerance")->capture_default_str();
  add_common(equiv);

  auto* decay = app.add_subcommand("decay", "mass of k^{*(n-j)} away from t = 1 relative to ||V_k^n||");
  add_kernel(decay);
  decay->add_option("--n", cfg.n, "n range a..b or list")->required();
  decay->add_option("--j", cfg.j, "power offset j")->capture_default_str();
  decay->add_option("--delta", cfg.delta, "cut-off delta in (0, 1)")->capture_default_str();
  decay->add_option("--degree", cfg.degree, "polynomial degree")->capture_default_str();
  add_p(decay);
  add_common(decay);

  auto* largedev = app.add_subcommand("largedev", "P(S_n <= 1): grid, oracle, Monte Carlo and asymptotic");
  largedev->add_option("--density", cfg.density, "density spec")->required();
  largedev->add_option("--n", cfg.n, "n list or range")->required();
  largedev->add_option("--trials", cfg.trials, "Monte Carlo trials (0 to skip)")->capture_default_str();
  largedev->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
  add_common(largedev);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "norm" && !format_given) cfg.format = "json";
  if (cfg.subcommand == "decay" && app.get_subcommands().front()->count("--p") == 0) cfg.p = "1";

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "error: --out: cannot open '" << cfg.out << "'\n";
      return kExitUsage;
    }
  }
  std::ostream& os = cfg.out.empty() ? out : file;

  static const std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>> handlers = {
      {"convpow", run_convpow}, {"norm", run_norm},   {"table", run_table},       {"extremal", run_extremal},
      {"equiv", run_equiv},     {"decay", run_decay}, {"largedev", run_largedev},
  };
  try {
    handlers.at(cfg.subcommand)(cfg, os);
  } catch (const ConvergenceError& e) {
    json doc = envelope(cfg);
    doc["error"] = e.what();
    doc["best"] = estimate_json(e.best());
    os << doc.dump(2) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace volterra
