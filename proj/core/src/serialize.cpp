#include "loewner/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "loewner/errors.hpp"

namespace loewner {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index p = 0; p < m.rows(); ++p) {
    Json row = Json::array();
    for (Eigen::Index q = 0; q < m.cols(); ++q) row.push_back({m(p, q).real(), m(p, q).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return Complex(e[0].get<double>(), e[1].get<double>());
  }
  throw ConfigError("matrix entry must be a number or an [re, im] pair, got " + e.dump());
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ConfigError("matrix rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index p = 0; p < rows; ++p) {
    const Json& row = j[static_cast<std::size_t>(p)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix rows must all have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index q = 0; q < cols; ++q) m(p, q) = entry_from_json(row[static_cast<std::size_t>(q)]);
  }
  return m;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

std::vector<Matrix> matrices_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of matrices");
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

Json interval_to_json(const Interval& d) {
  auto bound = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"lo", bound(d.lo)}, {"hi", bound(d.hi)}, {"lo_closed", d.lo_closed},
          {"hi_closed", d.hi_closed}};
}

Interval interval_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("interval must be an object");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Interval d;
  d.lo = j.contains("lo") && !j["lo"].is_null() ? j["lo"].get<double>() : -inf;
  d.hi = j.contains("hi") && !j["hi"].is_null() ? j["hi"].get<double>() : inf;
  d.lo_closed = j.value("lo_closed", false) && std::isfinite(d.lo);
  d.hi_closed = j.value("hi_closed", false) && std::isfinite(d.hi);
  return d;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace loewner
