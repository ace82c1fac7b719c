#include "loewner/witness.hpp"

#include <cmath>

#include "loewner/errors.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

namespace {

Json nested_to_json(const std::vector<std::vector<Matrix>>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) out.push_back(matrices_to_json(g));
  return out;
}

std::vector<std::vector<Matrix>> nested_from_json(const Json& j, const char* field) {
  if (!j.is_array()) throw ConfigError(std::string("witness: ") + field + " must be an array");
  std::vector<std::vector<Matrix>> out;
  for (const auto& g : j) out.push_back(matrices_from_json(g));
  return out;
}

std::vector<HermitianMatrix> hermitian(const std::vector<Matrix>& ms) {
  std::vector<HermitianMatrix> out;
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

const Json& required(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("witness: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json witness_to_json(const Witness& w) {
  Json j;
  j["version"] = w.version;
  j["command"] = w.command;
  j["function"] = w.function;
  Json dom = Json::array();
  for (const auto& d : w.domain) dom.push_back(interval_to_json(d));
  j["domain"] = dom;
  j["k"] = w.k;
  j["index"] = w.index ? Json{{"l", w.index->l}, {"j", w.index->j}} : Json(nullptr);
  j["orders"] = w.orders;
  j["seed"] = w.seed;
  j["trial"] = w.trial;
  j["margin"] = w.margin;
  j["operands"] = matrices_to_json(w.operands);
  j["decompositions"] = nested_to_json(w.decompositions);
  j["partitions"] = nested_to_json(w.partitions);
  j["rows"] = nested_to_json(w.rows);
  j["operands_y"] = matrices_to_json(w.operands_y);
  j["lambda"] = w.lambda ? Json(*w.lambda) : Json(nullptr);
  j["point"] = w.point;
  j["C"] = w.growth_constant ? Json(*w.growth_constant) : Json(nullptr);
  j["ordering"] = w.ordering;
  return j;
}

Witness witness_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("witness: expected a JSON object");
  try {
    Witness w;
    w.version = required(j, "version").get<int>();
    if (w.version != 1) throw ConfigError("witness: unsupported version " + std::to_string(w.version));
    w.command = required(j, "command").get<std::string>();
    w.function = required(j, "function").get<std::string>();
    w.k = required(j, "k").get<std::size_t>();
    if (j.contains("domain") && !j["domain"].is_null()) {
      for (const auto& d : j["domain"]) w.domain.push_back(interval_from_json(d));
    }
    if (j.contains("index") && !j["index"].is_null()) {
      w.index = MonotonicityIndex{j["index"].at("l").get<int>(), j["index"].at("j").get<int>()};
    }
    w.orders = required(j, "orders").get<std::vector<Eigen::Index>>();
    w.seed = j.value("seed", std::uint64_t{0});
    w.trial = j.value("trial", std::uint64_t{0});
    w.margin = required(j, "margin").get<double>();
    w.operands = matrices_from_json(required(j, "operands"));
    if (j.contains("operands_y")) w.operands_y = matrices_from_json(j["operands_y"]);
    if (j.contains("decompositions")) w.decompositions = nested_from_json(j["decompositions"], "decompositions");
    if (j.contains("partitions")) w.partitions = nested_from_json(j["partitions"], "partitions");
    if (j.contains("rows")) w.rows = nested_from_json(j["rows"], "rows");
    if (j.contains("lambda") && !j["lambda"].is_null()) w.lambda = j["lambda"].get<double>();
    if (j.contains("point")) w.point = j["point"].get<std::vector<double>>();
    if (j.contains("C") && !j["C"].is_null()) w.growth_constant = j["C"].get<double>();
    w.ordering = j.value("ordering", std::string("lex-1based"));
    if (w.ordering != "lex-1based") throw ConfigError("witness: unknown ordering '" + w.ordering + "'");
    return w;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("witness: malformed field: ") + e.what());
  }
}

Json report_to_json(const CheckReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["margin"] = r.margin;
  j["tolerance_used"] = r.tolerance_used;
  j["trials_run"] = r.trials_run;
  j["seed"] = r.seed;
  j["trial"] = r.trial;
  j["dead_zone"] = r.dead_zone;
  if (!r.point.empty()) j["point"] = r.point;
  j["note"] = r.violation() ? "violation found"
                            : "no violation found in " + std::to_string(r.trials_run) + " trials";
  if (r.instance) j["witness"] = witness_to_json(*r.instance);
  return j;
}

CheckReport replay(const Witness& w, const CheckOptions& opts) {
  ScalarFunction f = parse(w.function, w.k);
  if (!w.domain.empty()) f = f.with_domain(w.domain);
  const auto x = hermitian(w.operands);

  auto need_index = [&]() {
    if (!w.index) throw ConfigError("witness: command '" + w.command + "' needs an index");
    return *w.index;
  };

  CheckReport r;
  if (w.command == "monotone") {
    if (w.decompositions.size() != x.size()) throw ConfigError("witness: one decomposition per operand expected");
    std::vector<Decomposition> d;
    for (std::size_t i = 0; i < x.size(); ++i) d.push_back({x[i], hermitian(w.decompositions[i])});
    r = check_monotone_instance(f, OperandTuple(x), d, need_index(), opts);
  } else if (w.command == "convex") {
    if (!w.lambda) throw ConfigError("witness: convex witness needs lambda");
    r = check_convex_instance(f, x, hermitian(w.operands_y), *w.lambda, opts);
  } else if (w.command == "jensen-unitary") {
    std::vector<UnitaryRow> rows;
    for (const auto& e : w.rows) rows.push_back({e});
    r = jensen_unitary_check(f, OperandTuple(x), rows, need_index(), opts);
  } else if (w.command == "jensen-projection") {
    std::vector<PartitionOfUnity> parts;
    for (const auto& group : w.partitions) {
      PartitionOfUnity p;
      p.projections = hermitian(group);
      for (const auto& m : group) p.ranks.push_back(static_cast<int>(std::lround(m.trace().real())));
      parts.push_back(std::move(p));
    }
    r = jensen_projection_check(f, OperandTuple(x), parts, need_index(), opts);
  } else if (w.command == "tensor-monotone") {
    r = check_tensor_monotone(f, x, hermitian(w.operands_y), opts);
  } else if (w.command == "growth") {
    if (!w.growth_constant || w.point.size() != w.k) throw ConfigError("witness: growth witness needs C and point");
    double prod = 1.0;
    for (double v : w.point) prod = prod * v;
    const double value = f.eval(w.point);
    const double bound = *w.growth_constant / prod;
    r.margin = value + bound;
    r.tolerance_used = std::max(opts.violation_floor,
                                tol::kViolationRel * std::max({1.0, std::abs(value), std::abs(bound)}));
    r.verdict = r.margin < -r.tolerance_used ? Verdict::Violation : Verdict::Pass;
    r.trials_run = 1;
    r.point = w.point;
  } else {
    throw ConfigError("witness: unknown command '" + w.command + "'");
  }
  r.seed = w.seed;
  r.trial = w.trial;
  return r;
}

}  // namespace loewner
