#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>

#include "loewner/battery.hpp"
#include "loewner/checkers.hpp"
#include "loewner/errors.hpp"
#include "loewner/funcalc.hpp"
#include "loewner/serialize.hpp"
#include "loewner/tolerances.hpp"
#include "loewner/witness.hpp"

namespace loewner::cli {

namespace {

struct Config {
  std::string fn;
  std::size_t k = 0;
  int l = 2;
  int j = 0;
  std::vector<Eigen::Index> dims;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
  std::string format = "text";
  std::string domain;
  bool commuting = false;
  std::vector<double> box;
  double C = 1.0;
  int grid = 24;
  unsigned threads = 1;
  std::string input;  // funcalc matrices / replay witness
};

Eigen::Index max_dense_dim() {
  if (const char* env = std::getenv("LOEWNER_MAX_DIM")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw ConfigError(std::string("LOEWNER_MAX_DIM must be a positive integer, got '") + env + "'");
    }
    return static_cast<Eigen::Index>(v);
  }
  return tol::kMaxDenseDim;
}

void guard_dimension(long double dim) {
  const Eigen::Index cap = max_dense_dim();
  if (dim > static_cast<long double>(cap)) {
    std::ostringstream os;
    os << "dense dimension " << static_cast<double>(dim) << " exceeds the limit " << cap
       << " (set LOEWNER_MAX_DIM to override)";
    throw ConfigError(os.str());
  }
}

double parse_bound(std::string s) {
  s.erase(0, s.find_first_not_of(' '));
  s.erase(s.find_last_not_of(' ') + 1);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("bad interval bound '" + s + "'");
  return v;
}

// "[0,inf[", "]0,1[", "(0,1]" ...
Interval parse_interval(const std::string& s) {
  if (s.size() < 5) throw ConfigError("bad interval '" + s + "'");
  const char open = s.front();
  const char close = s.back();
  const auto comma = s.find(',');
  if ((open != '[' && open != ']' && open != '(') || (close != ']' && close != '[' && close != ')') ||
      comma == std::string::npos) {
    throw ConfigError("bad interval '" + s + "'; expected e.g. [0,inf[ or ]0,1[");
  }
  Interval d;
  d.lo = parse_bound(s.substr(1, comma - 1));
  d.hi = parse_bound(s.substr(comma + 1, s.size() - comma - 2));
  d.lo_closed = open == '[' && std::isfinite(d.lo);
  d.hi_closed = close == ']' && std::isfinite(d.hi);
  if (!(d.lo < d.hi)) throw ConfigError("empty interval '" + s + "'");
  return d;
}

std::vector<Interval> parse_domain(const std::string& spec, std::size_t k) {
  std::vector<Interval> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(parse_interval(part));
  if (out.size() == 1) out.assign(k, out.front());
  if (out.size() != k) throw ConfigError("--domain needs 1 or k intervals separated by ';'");
  return out;
}

// Built-in names win over expressions. Parsed expressions get the given
// command default domain unless --domain overrides it.
ScalarFunction resolve_function(const Config& c, const Interval& default_domain) {
  if (c.fn.empty()) throw ConfigError("--fn is required");
  if (c.k == 0) throw ConfigError("--k must be positive");
  ScalarFunction f = is_builtin_name(c.fn) ? builtin(c.fn, c.k)
                                           : parse(c.fn, c.k).with_domain(default_domain);
  if (!c.domain.empty()) f = f.with_domain(parse_domain(c.domain, c.k));
  return f;
}

std::vector<Eigen::Index> resolve_dims(const Config& c) {
  std::vector<Eigen::Index> dims = c.dims.empty() ? std::vector<Eigen::Index>(c.k, 1) : c.dims;
  if (dims.size() != c.k) {
    throw ConfigError("--dims lists " + std::to_string(dims.size()) + " orders but --k is " +
                      std::to_string(c.k));
  }
  for (auto n : dims) {
    if (n < 1) throw ConfigError("--dims entries must be positive");
  }
  return dims;
}

long double product(const std::vector<Eigen::Index>& dims) {
  long double p = 1;
  for (auto n : dims) p *= static_cast<long double>(n);
  return p;
}

CheckOptions check_options(const Config& c) {
  CheckOptions o;
  if (c.tol) {
    if (!(*c.tol > 0.0)) throw ConfigError("--tol must be positive");
    o.violation_floor = *c.tol;
  }
  return o;
}

void require_format(const Config& c) {
  if (c.format != "text" && c.format != "json") throw ConfigError("--format must be text or json");
}

int emit_report(const std::string& command, const CheckReport& r, const Config& c,
                std::ostream& out) {
  std::string witness_path;
  if (r.instance) {
    witness_path = c.out.empty() ? (c.format == "text" ? "witness.json" : "") : c.out;
    if (!witness_path.empty()) write_json_file(witness_path, witness_to_json(*r.instance));
  }
  if (c.format == "json") {
    Json j = report_to_json(r);
    j["command"] = command;
    if (!witness_path.empty()) j["witness_path"] = witness_path;
    out << j.dump(2) << '\n';
  } else {
    out << command << ": " << to_string(r.verdict) << '\n';
    if (!r.point.empty()) {
      out << "  min slack " << format6(r.margin) << " at (";
      for (std::size_t i = 0; i < r.point.size(); ++i) out << (i ? ", " : "") << format6(r.point[i]);
      out << ") over " << r.trials_run << " grid points\n";
      out << "  tolerance " << format6(r.tolerance_used) << '\n';
    } else if (r.violation()) {
      out << "  margin " << format6(r.margin) << " at trial " << r.trial << " (seed " << r.seed
          << ")\n";
      out << "  tolerance " << format6(r.tolerance_used) << '\n';
    } else {
      out << "  no violation found in " << r.trials_run << " trials (seed " << r.seed << ")\n";
      out << "  min margin " << format6(r.margin) << " at trial " << r.trial << '\n';
      out << "  tolerance " << format6(r.tolerance_used) << '\n';
    }
    if (!witness_path.empty()) out << "  witness written to " << witness_path << '\n';
    if (r.dead_zone > 0) {
      out << "  " << r.dead_zone << " trial(s) with small negative margins inside the tolerance\n";
    }
  }
  return r.violation() ? kViolation : kPass;
}

int cmd_check(const std::string& kind, const Config& c, std::ostream& out) {
  require_format(c);
  SearchOptions so;
  so.check = check_options(c);
  so.threads = std::max(1u, c.threads);
  const MonotonicityIndex idx{c.l, c.j};
  const std::string command = "check " + kind;

  if (kind == "growth") {
    const ScalarFunction g = resolve_function(c, Interval::open_positive());
    std::vector<double> box = c.box.empty() ? std::vector<double>(c.k, 1.0) : c.box;
    return emit_report(command, growth_bound_check(g, box, c.C, c.grid, so.check), c, out);
  }

  const std::vector<Eigen::Index> dims = resolve_dims(c);
  const long double n = product(dims);
  const long double blocks =
      std::pow(static_cast<long double>(c.l), static_cast<long double>(c.k) - 1.0L);

  CheckReport r;
  if (kind == "monotone") {
    idx.validate();
    guard_dimension(n * blocks);
    const ScalarFunction g = resolve_function(c, Interval::open_positive());
    r = check_monotone_search(g, idx, dims, c.trials, c.seed, so);
  } else if (kind == "convex") {
    guard_dimension(n);
    const ScalarFunction f = resolve_function(c, Interval::closed_nonnegative());
    r = check_convex_search(f, dims, c.trials, c.seed, so);
  } else if (kind == "jensen-unitary") {
    idx.validate();
    guard_dimension(n * blocks);
    const ScalarFunction f = resolve_function(c, Interval::closed_nonnegative());
    r = jensen_unitary_search(f, idx, dims, c.trials, c.seed, so);
  } else if (kind == "jensen-projection") {
    idx.validate();
    guard_dimension(n * blocks);
    const ScalarFunction f = resolve_function(c, Interval::closed_nonnegative());
    r = jensen_projection_search(f, idx, dims, c.trials, c.seed, so);
  } else {
    guard_dimension(n);
    const ScalarFunction f = resolve_function(c, Interval::closed_nonnegative());
    r = tensor_monotone_search(f, dims, c.trials, c.seed, so);
  }
  return emit_report(command, r, c, out);
}

std::vector<HermitianMatrix> load_operands(const std::string& path) {
  const Json j = read_json_file(path);
  const Json& arr = j.is_object() ? j.at("operands") : j;
  std::vector<HermitianMatrix> out;
  for (const Matrix& m : matrices_from_json(arr)) {
    if (m.rows() != m.cols()) throw DimensionMismatch("funcalc: operands must be square");
    out.emplace_back(m);
  }
  if (out.empty()) throw ConfigError("funcalc: no operands in " + path);
  return out;
}

int cmd_funcalc(Config c, std::ostream& out) {
  require_format(c);
  const auto x = load_operands(c.input);
  if (c.k == 0) c.k = x.size();
  if (c.k != x.size()) {
    throw DimensionMismatch("funcalc: --k is " + std::to_string(c.k) + " but the file holds " +
                            std::to_string(x.size()) + " operands");
  }
  const ScalarFunction f = resolve_function(c, Interval::open_positive());

  std::vector<Eigen::Index> dims;
  for (const auto& m : x) dims.push_back(m.dim());
  guard_dimension(c.commuting ? static_cast<long double>(x.front().dim()) : product(dims));
  const HermitianMatrix result = c.commuting ? apply_commuting(f, x) : apply_multivariate(f, x);

  Json j{{"function", f.source()}, {"k", c.k}, {"dims", dims}, {"commuting", c.commuting},
         {"result", matrix_to_json(result.matrix())}};
  if (!c.out.empty()) write_json_file(c.out, j);
  if (c.format == "json") {
    if (c.out.empty()) out << j.dump(2) << '\n';
  } else {
    const Matrix& m = result.matrix();
    out << "funcalc " << f.source() << " -> " << m.rows() << "x" << m.cols() << '\n';
    for (Eigen::Index p = 0; p < m.rows(); ++p) {
      for (Eigen::Index q = 0; q < m.cols(); ++q) {
        out << (q ? "  " : "") << format6(m(p, q).real());
        if (m(p, q).imag() != 0.0) out << (m(p, q).imag() < 0 ? "-" : "+") << format6(std::abs(m(p, q).imag())) << "i";
      }
      out << '\n';
    }
    if (!c.out.empty()) out << "written to " << c.out << '\n';
  }
  return kPass;
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  require_format(c);
  BatteryConfig bc;
  bc.seed = c.seed;
  bc.threads = std::max(1u, c.threads);
  if (c.tol) bc.violation_floor = *c.tol;
  try {
    validate(bc);
  } catch (const ConfigError& e) {
    if (c.format == "json") {
      out << Json{{"seed", c.seed}, {"ok", false}, {"rejected", e.what()}}.dump(2) << '\n';
    } else {
      out << "verify-paper: " << e.what() << '\n';
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const BatteryReport rep = run_battery(bc);
  if (!c.out.empty()) write_json_file(c.out, battery_to_json(rep));
  if (c.format == "json") {
    out << battery_to_json(rep).dump(2) << '\n';
  } else {
    out << battery_to_text(rep);
  }
  return rep.ok() ? kPass : kViolation;
}

int cmd_replay(const Config& c, std::ostream& out) {
  require_format(c);
  const Witness w = witness_from_json(read_json_file(c.input));
  const CheckReport r = replay(w, check_options(c));
  const double delta = std::abs(r.margin - w.margin);
  const bool same = delta <= tol::kWitnessReplay;
  if (c.format == "json") {
    out << Json{{"command", w.command},
                {"recorded_margin", w.margin},
                {"replayed_margin", r.margin},
                {"difference", delta},
                {"verdict", to_string(r.verdict)},
                {"reproduced", same}}
               .dump(2)
        << '\n';
  } else {
    out << "replay " << w.command << ": " << (same ? "reproduced" : "NOT reproduced") << '\n';
    out << "  recorded margin " << format6(w.margin) << ", replayed " << format6(r.margin)
        << " (difference " << format6(delta) << ")\n";
    out << "  verdict " << to_string(r.verdict) << '\n';
  }
  return same ? kPass : kViolation;
}

void add_common(CLI::App* app, Config& c) {
  app->add_option("--format", c.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app->add_option("--out", c.out, "Output file (witness, result or battery report)");
}

void add_function(CLI::App* app, Config& c) {
  app->add_option("--fn", c.fn, "Expression in r1..rk or a built-in name");
  app->add_option("--k", c.k, "Number of variables");
  app->add_option("--domain", c.domain, "Domain override, e.g. '[0,inf[' or ']0,1[;]0,1['");
  app->add_option("--tol", c.tol, "Violation threshold floor (default 1e-7)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for operator monotone and convex functions of several variables",
               "loewner"};
  app.require_subcommand(1);
  Config c;

  CLI::App* funcalc = app.add_subcommand("funcalc", "Apply f to a tuple of Hermitian matrices");
  funcalc->add_option("matrices", c.input, "JSON file with the operand matrices")->required();
  funcalc->add_flag("--commuting", c.commuting, "Use the one-space calculus for commuting operands");
  add_function(funcalc, c);
  add_common(funcalc, c);

  CLI::App* check = app.add_subcommand("check", "Check an operator inequality on sampled instances");
  check->require_subcommand(1);
  const char* kinds[] = {"monotone", "convex", "jensen-unitary", "jensen-projection",
                         "tensor-monotone", "growth"};
  std::string kind;
  for (const char* name : kinds) {
    CLI::App* sub = check->add_subcommand(name);
    add_function(sub, c);
    add_common(sub, c);
    sub->add_option("--l", c.l, "Index l (decomposition length)");
    sub->add_option("--j", c.j, "Index j (congruence class)");
    sub->add_option("--dims", c.dims, "Orders n_1,..,n_k")->delimiter(',');
    sub->add_option("--trials", c.trials, "Number of random trials");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)");
    sub->add_option("--box", c.box, "Growth: per-variable upper bounds")->delimiter(',');
    sub->add_option("--C", c.C, "Growth: constant C");
    sub->add_option("--grid", c.grid, "Growth: points per axis");
    sub->callback([&kind, name] { kind = name; });
  }

  CLI::App* verify = app.add_subcommand("verify-paper", "Run the reproduction battery");
  verify->add_option("--seed", c.seed, "Random seed");
  verify->add_option("--tol", c.tol, "Violation threshold floor (at most 1e-6)");
  verify->add_option("--threads", c.threads, "Worker threads");
  add_common(verify, c);

  CLI::App* replay_cmd = app.add_subcommand("replay", "Re-run the check recorded in a witness");
  replay_cmd->add_option("witness", c.input, "Witness JSON file")->required();
  replay_cmd->add_option("--tol", c.tol, "Violation threshold floor");
  add_common(replay_cmd, c);

  std::vector<const char*> argv{"loewner"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (funcalc->parsed()) return cmd_funcalc(c, out);
    if (check->parsed()) return cmd_check(kind, c, out);
    if (verify->parsed()) return cmd_verify(c, out, err);
    return cmd_replay(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace loewner::cli
