#pragma once

// Real functions of k real variables: a small arithmetic expression language
// plus a catalog of native built-ins.
//
// Grammar:
//   expr     := term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := "-" factor | power
//   power    := atom ("^" factor)?
//   atom     := number | variable | call | "(" expr ")"
//   variable := "r" digits            (1-based, index <= k)
//   call     := ("sqrt"|"exp"|"log") "(" expr ")"

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loewner {

namespace detail {
struct Node;
}

/// A real interval with optional closed endpoints; hi may be +infinity.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  /// ]0, hi[
  static Interval open_positive(double hi = std::numeric_limits<double>::infinity());
  /// [0, hi[
  static Interval closed_nonnegative(double hi = std::numeric_limits<double>::infinity());

  bool contains(double v) const noexcept;
  bool upper_bounded() const noexcept { return hi < std::numeric_limits<double>::infinity(); }
  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

class ScalarFunction {
 public:
  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Interval>& domain() const noexcept { return domain_; }

  /// IEEE evaluation of the tree. Throws DomainError on arithmetic domain
  /// failures or a non-finite result; does not check the declared domain.
  double eval(std::span<const double> point) const;
  double operator()(std::span<const double> point) const { return eval(point); }
  double operator()(std::initializer_list<double> point) const {
    return eval(std::span<const double>(point.begin(), point.size()));
  }

  bool in_domain(std::span<const double> point) const;

  /// Fully parenthesized canonical text; parse(source(), arity()) evaluates
  /// identically. Built-ins print their expression equivalent.
  std::string source() const;

  /// Name of the catalog entry, or empty for parsed functions.
  const std::string& builtin_name() const noexcept { return builtin_name_; }

  ScalarFunction with_domain(std::vector<Interval> domain) const;
  ScalarFunction with_domain(const Interval& all) const;

  /// The one-variable function t -> f(frozen[0], .., t, .., frozen[k-1])
  /// obtained by fixing every variable but `var` (0-based).
  ScalarFunction slice(std::size_t var, std::span<const double> frozen) const;

  /// f / (r1 ... rk) on the open box: lower endpoints become open.
  ScalarFunction divided_by_product() const;

 private:
  friend ScalarFunction parse(std::string_view, std::size_t);
  friend ScalarFunction builtin(std::string_view, std::size_t);
  ScalarFunction(std::shared_ptr<const detail::Node> root, std::size_t arity,
                 std::vector<Interval> domain, std::string builtin_name = {});

  std::shared_ptr<const detail::Node> root_;
  std::size_t arity_ = 0;
  std::vector<Interval> domain_;
  std::string builtin_name_;
};

/// Parses `source` as a function of r1..rk. The declared domain defaults to
/// ]0, inf[ in every variable. Throws ParseError.
ScalarFunction parse(std::string_view source, std::size_t k);

/// Catalog entries: "product", "neg_inv_product", "constant(c)", "koranyi_g",
/// "koranyi_f", "sqrt1", "square1". Throws ConfigError for unknown names or
/// an arity the entry does not support.
ScalarFunction builtin(std::string_view name, std::size_t k);

bool is_builtin_name(std::string_view name);
std::vector<std::string> builtin_names();

/// Expression text equivalent to the named catalog entry.
std::string builtin_equivalent_source(std::string_view name, std::size_t k);

}  // namespace loewner
