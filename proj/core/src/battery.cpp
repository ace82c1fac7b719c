#include "loewner/battery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "loewner/checkers.hpp"
#include "loewner/decomp.hpp"
#include "loewner/errors.hpp"
#include "loewner/funcalc.hpp"
#include "loewner/multi_index.hpp"
#include "loewner/random.hpp"

namespace loewner {

std::string format6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool BatteryReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const BatteryItem& i) { return i.ok; });
}

bool BatteryReport::group_ok(int group) const {
  bool any = false;
  for (const auto& i : items) {
    if (i.group != group) continue;
    any = true;
    if (!i.ok) return false;
  }
  return any;
}

std::string BatteryReport::verdict_signature() const {
  std::string s;
  for (const auto& i : items) {
    s += std::to_string(i.group) + ":" + i.name + "=" + i.verdict + (i.ok ? "+" : "-") + ";";
  }
  return s;
}

void validate(const BatteryConfig& cfg) {
  if (!(cfg.violation_floor > 0.0) || !(cfg.violation_floor <= kMaxBatteryFloor)) {
    throw ConfigError("configuration rejected: violation tolerance " + format6(cfg.violation_floor) +
                      " outside (0, " + format6(kMaxBatteryFloor) + "]");
  }
  if (cfg.threads == 0) throw ConfigError("configuration rejected: threads must be positive");
}

namespace {

constexpr std::uint64_t kSaltSeparable = 0x73657061ULL;
constexpr std::uint64_t kSaltProjections = 0x70726f6aULL;

using Items = std::vector<BatteryItem>;

std::string index_name(const MonotonicityIndex& idx) {
  return "(" + std::to_string(idx.l) + "," + std::to_string(idx.j) + ")";
}

std::string orders_name(const std::vector<Eigen::Index>& orders) {
  std::string s = "(";
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(orders[i]);
  }
  return s + ")";
}

std::string search_detail(const CheckReport& r) {
  if (r.violation()) {
    return "violation at trial " + std::to_string(r.trial) + ", margin " + format6(r.margin);
  }
  return "no violation in " + std::to_string(r.trials_run) + " trials, min margin " +
         format6(r.margin);
}

BatteryItem expect(int group, std::string name, const CheckReport& r, Verdict wanted) {
  return {group, std::move(name), r.verdict == wanted, to_string(r.verdict), search_detail(r)};
}

// Witness thresholds: a violation must clear -1e-6 to count as a witness.
constexpr double kWitnessFloor = 1e-6;

SearchOptions search_options(const BatteryConfig& cfg, double floor = 0.0) {
  SearchOptions o;
  o.check.violation_floor = std::max(cfg.violation_floor, floor);
  o.threads = cfg.threads;
  return o;
}

Decomposition halves(double x, int l) {
  std::vector<HermitianMatrix> parts(static_cast<std::size_t>(l),
                                     HermitianMatrix::diagonal({x / l}));
  return {HermitianMatrix::diagonal({x}), std::move(parts)};
}

// -- 1: separable products -------------------------------------------------

struct Factor {
  const char* source;
  double (*fn)(double);
};

Items group_separable(const BatteryConfig& cfg) {
  static const Factor factors[] = {
      {"sqrt(r1)", [](double t) { return std::sqrt(t); }},
      {"log(1+r1)", [](double t) { return std::log1p(t); }},
      {"exp(-r1)", [](double t) { return std::exp(-t); }},
  };

  double worst = 0.0;
  int cases = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    for (std::size_t k = 2; k <= 3; ++k) {
      Rng rng = trial_stream(cfg.seed, s * 4 + k, kSaltSeparable);
      std::string src;
      std::vector<HermitianMatrix> x;
      std::vector<Matrix> expected;
      for (std::size_t i = 0; i < k; ++i) {
        const Factor& fac = factors[(s + i) % 3];
        std::string term = fac.source;
        term.replace(term.find("r1"), 2, "r" + std::to_string(i + 1));
        src += (i ? "*" : "") + term;
        const auto n = std::uniform_int_distribution<Eigen::Index>(1, 4)(rng);
        x.push_back(sample_operand(n, Interval::open_positive(), rng));
        expected.push_back(spectral_apply(x.back(), fac.fn).matrix());
      }
      const ScalarFunction f = parse(src, k);
      const Matrix got = apply_multivariate(f, x).matrix();
      const Matrix want = kron_all(expected);
      worst = std::max(worst, (got - want).norm() / scale_of(want));
      ++cases;
    }
  }
  const bool ok = worst <= 1e-9;
  return {{1, "separable product identity", ok, ok ? "pass" : "fail",
           std::to_string(cases) + " cases, max relative deviation " + format6(worst)}};
}

// -- 2: multi-index enumeration -------------------------------------------

Items group_multi_index(const BatteryConfig&) {
  Items out;
  struct Listed {
    std::size_t k;
    int l, j;
    std::vector<MultiIndex> sets;
  };
  const Listed listed[] = {
      {2, 2, 0, {{1, 1}, {2, 2}}},
      {2, 2, 1, {{1, 2}, {2, 1}}},
      {2, 3, 0, {{1, 2}, {2, 1}, {3, 3}}},
      {3, 2, 0, {{1, 1, 2}, {1, 2, 1}, {2, 1, 1}, {2, 2, 2}}},
  };
  for (const auto& e : listed) {
    const bool ok = enumerate_multi_indices(e.k, e.l, e.j).indices == e.sets;
    out.push_back({2, "listed set k=" + std::to_string(e.k) + " l=" + std::to_string(e.l) +
                          " j=" + std::to_string(e.j),
                   ok, ok ? "pass" : "fail", ""});
  }

  int bad = 0;
  int configs = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (int l = 2; l <= 6; ++l) {
      for (int j = 0; j < l; ++j) {
        std::vector<MultiIndex> brute;
        MultiIndex t(k, 1);
        for (;;) {
          int sum = 0;
          for (int v : t) sum += v;
          if (sum % l == j) brute.push_back(t);
          std::size_t i = k;
          while (i > 0 && t[i - 1] == l) t[--i] = 1;
          if (i == 0) break;
          ++t[i - 1];
        }
        const auto set = enumerate_multi_indices(k, l, j);
        const auto expected_size = static_cast<std::size_t>(std::lround(std::pow(l, k - 1)));
        if (set.indices != brute || set.size() != expected_size) ++bad;
        ++configs;
      }
    }
  }
  out.push_back({2, "cardinality l^(k-1), l<=6, k<=4", bad == 0, bad == 0 ? "pass" : "fail",
                 std::to_string(configs) + " configurations, " + std::to_string(bad) + " mismatches"});
  return out;
}

// -- 3: projection families -----------------------------------------------

Items group_projections(const BatteryConfig& cfg) {
  Items out;
  constexpr double kTol = 1e-10;

  double p_err = 0.0;
  for (int l = 2; l <= 5; ++l) {
    Matrix sum = Matrix::Zero(l, l);
    for (int a = 0; a < l; ++a) {
      const Matrix pa = build_Pj(l, a).matrix();
      sum += pa;
      for (int b = 0; b < l; ++b) {
        const Matrix pb = build_Pj(l, b).matrix();
        const Matrix want = a == b ? pa : Matrix::Zero(l, l);
        p_err = std::max(p_err, (pa * pb - want).norm());
      }
    }
    p_err = std::max(p_err, (sum - Matrix::Identity(l, l)).norm());
  }
  out.push_back({3, "P_j orthogonal, sum I (l<=5)", p_err <= kTol, p_err <= kTol ? "pass" : "fail",
                 "max residual " + format6(p_err)});

  double q_err = 0.0;
  double ident_err = 0.0;
  for (int l = 2; l <= 5; ++l) {
    Rng rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(l), kSaltProjections);
    std::vector<double> xv(static_cast<std::size_t>(l));
    for (double& v : xv) v = log_uniform(1e-1, 1e1, rng);
    double total = 0.0;
    for (double v : xv) total += v;
    std::vector<double> root(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) root[i] = std::sqrt(xv[i]);
    const Matrix xh = HermitianMatrix::diagonal(root).matrix();
    for (int s = 0; s < l; ++s) {
      const Matrix q = build_Q(s, xv).matrix();
      q_err = std::max(q_err, (q * q - q).norm());
      q_err = std::max(q_err, std::abs(q.trace() - Complex(1.0)));
      const Matrix lhs = xh * build_Pj(l, s).matrix() * xh;
      ident_err = std::max(ident_err, (lhs - (total / l) * q).norm());
    }
  }
  out.push_back({3, "Q_s idempotent, trace 1", q_err <= kTol, q_err <= kTol ? "pass" : "fail",
                 "max residual " + format6(q_err)});
  out.push_back({3, "x^1/2 P_s x^1/2 = (sum x / l) Q_s", ident_err <= 1e-12,
                 ident_err <= 1e-12 ? "pass" : "fail", "max residual " + format6(ident_err)});

  double pi_err = 0.0;
  double sum_err = 0.0;
  double shift_err = 0.0;
  double class_err = 0.0;
  for (int l = 2; l <= 3; ++l) {
    for (std::size_t k = 2; k <= 3; ++k) {
      for (int j = 0; j < l; ++j) {
        std::vector<MultiIndex> us;
        MultiIndex u(k, 1);
        for (;;) {
          us.push_back(u);
          std::size_t i = k;
          while (i > 0 && u[i - 1] == l) u[--i] = 1;
          if (i == 0) break;
          ++u[i - 1];
        }
        std::vector<Matrix> pis;
        for (const auto& uu : us) pis.push_back(build_Pi_u(l, j, k, uu).matrix());
        const Eigen::Index m = pis.front().rows();
        Matrix sum = Matrix::Zero(m, m);
        for (const auto& p : pis) {
          sum += p;
          pi_err = std::max(pi_err, (p - p.adjoint()).norm());
          pi_err = std::max(pi_err, (p * p - p).norm());
        }
        sum_err = std::max(sum_err, (sum - static_cast<double>(l) * Matrix::Identity(m, m)).norm());

        auto shifted = [&](const MultiIndex& a, const MultiIndex& b) {
          const int d = ((b[0] - a[0]) % l + l) % l;
          for (std::size_t i = 0; i < k; ++i) {
            if (((b[i] - a[i]) % l + l) % l != d) return false;
          }
          return true;
        };
        for (std::size_t a = 0; a < us.size(); ++a) {
          for (std::size_t b = 0; b < us.size(); ++b) {
            if (shifted(us[a], us[b])) {
              shift_err = std::max(shift_err, (pis[a] - pis[b]).norm());
            } else {
              class_err = std::max(class_err, (pis[a] * pis[b]).norm());
            }
          }
        }
      }
    }
  }
  auto item = [&](const char* name, double err) {
    out.push_back({3, name, err <= kTol, err <= kTol ? "pass" : "fail", "max residual " + format6(err)});
  };
  item("Pi_u Hermitian idempotent", pi_err);
  item("sum_u Pi_u = l I", sum_err);
  item("Pi_u = Pi_v on shift classes", shift_err);
  item("Pi_u orthogonal across classes", class_err);
  return out;
}

// -- 4: one-variable consistency -----------------------------------------

Items group_one_variable(const BatteryConfig& cfg) {
  Items out;
  const SearchOptions opts = search_options(cfg);
  const ScalarFunction sqrt_fn = builtin("sqrt1", 1);
  const MonotonicityIndex indices[] = {{2, 0}, {2, 1}, {3, 0}, {3, 2}};
  for (const auto& idx : indices) {
    for (Eigen::Index n = 1; n <= 4; ++n) {
      const auto r = check_monotone_search(sqrt_fn, idx, {n}, 200, cfg.seed, opts);
      out.push_back(expect(4, "sqrt monotone idx " + index_name(idx) + " order " + std::to_string(n),
                           r, Verdict::Pass));
    }
  }
  const auto r = check_monotone_search(builtin("square1", 1), {2, 0}, {2}, 200, cfg.seed,
                                       search_options(cfg, kWitnessFloor));
  BatteryItem it = expect(4, "square violation idx (2,0) order 2", r, Verdict::Violation);
  it.ok = it.ok && r.margin <= -1e-6;
  out.push_back(it);
  return out;
}

// -- 5: monotone searches for -1/(r1 r2) and the constant 1 --------------

Items group_inverse_product(const BatteryConfig& cfg) {
  Items out;
  const SearchOptions opts = search_options(cfg);
  const ScalarFunction g = builtin("neg_inv_product", 2);
  for (int l = 2; l <= 3; ++l) {
    for (int j = 0; j < l; ++j) {
      for (Eigen::Index n = 1; n <= 3; ++n) {
        const std::vector<Eigen::Index> orders{n, n};
        const auto r = check_monotone_search(g, {l, j}, orders, 200, cfg.seed, opts);
        out.push_back(expect(5, "-1/(r1*r2) idx " + index_name({l, j}) + " orders " + orders_name(orders),
                             r, Verdict::Pass));
      }
    }
  }

  const ScalarFunction one = parse("1", 2);
  const auto r = check_monotone_search(one, {2, 0}, {1, 1}, 50, cfg.seed, opts);
  out.push_back(expect(5, "constant 1 violation within 50 trials", r, Verdict::Violation));

  CheckOptions co;
  co.violation_floor = cfg.violation_floor;
  const auto inst = check_monotone_instance(one, OperandTuple({HermitianMatrix::diagonal({1.0}),
                                                                HermitianMatrix::diagonal({1.0})}),
                                            {halves(1.0, 2), halves(1.0, 2)}, {2, 0}, co);
  const bool exact = inst.violation() && std::abs(inst.margin + 1.0) <= 1e-9;
  out.push_back({5, "constant 1 scalar witness margin -1", exact, exact ? "violation" : "fail",
                 "margin " + format6(inst.margin)});
  return out;
}

// -- 6: the two counterexamples ------------------------------------------

Items group_counterexamples(const BatteryConfig& cfg) {
  Items out;
  const auto r = check_convex_search(builtin("koranyi_f", 2), {2, 2}, 500, cfg.seed,
                                     search_options(cfg, kWitnessFloor));
  BatteryItem it = expect(6, "r1^2*r2^2/((1+r1)*(1+r2)) not convex at (2,2)", r, Verdict::Violation);
  it.ok = it.ok && r.margin <= -1e-6;
  out.push_back(it);

  CheckOptions co;
  co.violation_floor = cfg.violation_floor;
  const ScalarFunction g = parse("r1*r2/((1+r1)*(1+r2))", 2);
  const auto inst = check_monotone_instance(g, OperandTuple({HermitianMatrix::diagonal({1.0}),
                                                              HermitianMatrix::diagonal({1.0})}),
                                            {halves(1.0, 2), halves(1.0, 2)}, {2, 0}, co);
  const bool exact = inst.violation() && std::abs(inst.margin + 1.0 / 9.0) <= 1e-9;
  out.push_back({6, "r1*r2/((1+r1)*(1+r2)) scalar margin -1/9", exact, exact ? "violation" : "fail",
                 "margin " + format6(inst.margin)});
  return out;
}

// -- 7: Jensen forms -----------------------------------------------------

Items group_jensen(const BatteryConfig& cfg) {
  Items out;
  const SearchOptions opts = search_options(cfg);
  struct Case {
    const char* label;
    ScalarFunction f;
  };
  const Case cases[] = {
      {"constant -1", builtin("constant(-1)", 2)},
      {"t^2", builtin("square1", 1)},
  };
  for (const auto& c : cases) {
    for (int l = 2; l <= 3; ++l) {
      for (int j = 0; j < 2; ++j) {
        const std::vector<Eigen::Index> orders(c.f.arity(), c.f.arity() == 1 ? 3 : l);
        const MonotonicityIndex idx{l, j};
        const std::string where = " idx " + index_name(idx) + " orders " + orders_name(orders);
        out.push_back(expect(7, std::string(c.label) + " unitary rows" + where,
                             jensen_unitary_search(c.f, idx, orders, 200, cfg.seed, opts),
                             Verdict::Pass));
        out.push_back(expect(7, std::string(c.label) + " projections" + where,
                             jensen_projection_search(c.f, idx, orders, 200, cfg.seed, opts),
                             Verdict::Pass));
      }
    }
  }
  const auto r = jensen_unitary_search(builtin("product", 2), {2, 0}, {2, 2}, 200, cfg.seed, opts);
  out.push_back(expect(7, "r1*r2 unitary-row violation", r, Verdict::Violation));
  return out;
}

// -- 8: convexity of f implies index monotonicity of f / (r1..rk) ------------

Items group_implication(const BatteryConfig& cfg) {
  Items out;
  const SearchOptions opts = search_options(cfg);
  struct Pair {
    const char* name;
    std::size_t k;
  };
  const Pair catalog[] = {
      {"constant(-1)", 2}, {"product", 2}, {"neg_inv_product", 2},
      {"koranyi_f", 2},    {"square1", 1}, {"sqrt1", 1},
  };
  for (const auto& p : catalog) {
    const ScalarFunction f = builtin(p.name, p.k);
    const ScalarFunction g = f.divided_by_product();
    for (int l = 2; l <= 3; ++l) {
      const std::vector<Eigen::Index> n(p.k, 1);
      const std::vector<Eigen::Index> ln(p.k, l);
      const auto conv = check_convex_search(f, ln, 200, cfg.seed, opts);
      std::string verdict = "convex " + to_string(conv.verdict) + ", monotone";
      bool all_mono = true;
      for (int j = 0; j < l; ++j) {
        const auto mono = check_monotone_search(g, {l, j}, n, 200, cfg.seed, opts);
        verdict += " " + to_string(mono.verdict);
        all_mono = all_mono && !mono.violation();
      }
      const bool ok = conv.violation() || all_mono;
      out.push_back({8, std::string(p.name) + " l=" + std::to_string(l), ok, verdict,
                     conv.violation() ? "convexity violated (implication vacuous)"
                                      : "convexity held; monotonicity required"});
    }
  }
  return out;
}

// -- 9: growth bound -----------------------------------------------------

Items group_growth(const BatteryConfig& cfg) {
  Items out;
  CheckOptions co;
  co.violation_floor = cfg.violation_floor;
  const auto r = growth_bound_check(builtin("neg_inv_product", 2), {1.0, 1.0}, 1.0, 24, co);
  const bool tight = !r.violation() && std::abs(r.margin) <= r.tolerance_used;
  out.push_back({9, "-1/(r1*r2) with C=1 on the unit box", tight, to_string(r.verdict),
                 "min slack " + format6(r.margin) + " over " + std::to_string(r.trials_run) + " points"});
  const auto bad = growth_bound_check(parse("-1/(r1^2*r2)", 2), {1.0, 1.0}, 1.0, 24, co);
  out.push_back({9, "-1/(r1^2*r2) with C=1 violates", bad.violation(), to_string(bad.verdict),
                 "min slack " + format6(bad.margin)});
  return out;
}

}  // namespace

std::vector<BatteryItem> run_battery_group(int group, const BatteryConfig& cfg) {
  validate(cfg);
  switch (group) {
    case 1: return group_separable(cfg);
    case 2: return group_multi_index(cfg);
    case 3: return group_projections(cfg);
    case 4: return group_one_variable(cfg);
    case 5: return group_inverse_product(cfg);
    case 6: return group_counterexamples(cfg);
    case 7: return group_jensen(cfg);
    case 8: return group_implication(cfg);
    case 9: return group_growth(cfg);
    default: throw ConfigError("battery group must be 1..9");
  }
}

BatteryReport run_battery(const BatteryConfig& cfg) {
  validate(cfg);
  BatteryReport rep;
  rep.seed = cfg.seed;
  for (int g = 1; g <= 9; ++g) {
    auto items = run_battery_group(g, cfg);
    rep.items.insert(rep.items.end(), items.begin(), items.end());
  }
  return rep;
}

Json battery_to_json(const BatteryReport& r) {
  Json items = Json::array();
  for (const auto& i : r.items) {
    items.push_back({{"group", i.group}, {"name", i.name}, {"ok", i.ok}, {"verdict", i.verdict},
                     {"detail", i.detail}});
  }
  return {{"seed", r.seed}, {"ok", r.ok()}, {"items", items}};
}

std::string battery_to_text(const BatteryReport& r) {
  std::ostringstream os;
  os << "verify-paper seed " << r.seed << "\n";
  for (const auto& i : r.items) {
    os << "[" << i.group << "] " << (i.ok ? "ok  " : "FAIL") << "  " << i.name << ": " << i.verdict;
    if (!i.detail.empty()) os << " (" << i.detail << ")";
    os << "\n";
  }
  std::size_t failed = 0;
  for (const auto& i : r.items) failed += i.ok ? 0 : 1;
  os << (failed == 0 ? "all " + std::to_string(r.items.size()) + " items ok"
                     : std::to_string(failed) + " of " + std::to_string(r.items.size()) + " items failed")
     << "\n";
  return os.str();
}

}  // namespace loewner
