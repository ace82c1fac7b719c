#pragma once

// JSON forms of matrices and intervals. A matrix is a row-major array of rows,
// each entry an [re, im] pair; plain numbers are accepted as real entries.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loewner/expr.hpp"
#include "loewner/matrix.hpp"

namespace loewner {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
/// Throws ConfigError on malformed input (ragged rows, non-numeric entries).
Matrix matrix_from_json(const Json& j);

Json matrices_to_json(const std::vector<Matrix>& ms);
std::vector<Matrix> matrices_from_json(const Json& j);

/// {"lo", "hi", "lo_closed", "hi_closed"}; an infinite bound is null.
Json interval_to_json(const Interval& d);
Interval interval_from_json(const Json& j);

/// Whole-file helpers; throw ConfigError when the file cannot be opened or parsed.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace loewner
