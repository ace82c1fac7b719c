#pragma once

// Instance checks and randomized searches for the operator inequalities:
// index (l, j) monotonicity, matrix convexity, the Jensen block inequalities
// (unitary-row and projection forms), tensor-order monotonicity and the
// growth bound g >= -C / (r_1 .. r_k).
//
// Every check reduces an inequality LHS <= RHS to the smallest eigenvalue
// (the margin) of the Hermitian difference RHS - LHS.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loewner/decomp.hpp"
#include "loewner/expr.hpp"
#include "loewner/funcalc.hpp"
#include "loewner/multi_index.hpp"

namespace loewner {

enum class Verdict { Pass, Violation };

std::string to_string(Verdict v);

/// A fully serializable instance; see witness.hpp for the JSON form.
struct Witness {
  int version = 1;
  std::string command;  // monotone | convex | jensen-unitary | jensen-projection | tensor-monotone | growth
  std::string function;
  std::vector<Interval> domain;
  std::size_t k = 0;
  std::optional<MonotonicityIndex> index;
  std::vector<Eigen::Index> orders;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  double margin = 0.0;
  std::vector<Matrix> operands;
  std::vector<Matrix> operands_y;  // convex, tensor-monotone
  std::optional<double> lambda;    // convex
  std::vector<std::vector<Matrix>> decompositions;  // monotone: parts per variable
  std::vector<std::vector<Matrix>> partitions;      // jensen-projection
  std::vector<std::vector<Matrix>> rows;            // jensen-unitary
  std::vector<double> point;                        // growth: location of minimal slack
  std::optional<double> growth_constant;            // growth: C
  std::string ordering = "lex-1based";
};

struct CheckReport {
  Verdict verdict = Verdict::Pass;
  double margin = 0.0;          // smallest eigenvalue of RHS - LHS (minimum over trials)
  double tolerance_used = 0.0;  // violation iff margin < -tolerance_used
  std::optional<Witness> instance;  // present for violations
  std::size_t trials_run = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;      // trial that produced `margin`
  std::size_t dead_zone = 0;    // trials with -tolerance_used <= margin < 0
  std::vector<double> point;    // growth: grid point of minimal slack

  bool violation() const noexcept { return verdict == Verdict::Violation; }
};

struct CheckOptions {
  /// Absolute floor of the violation threshold
  /// max(violation_floor, 1e-9 * ||RHS - LHS||_F).
  double violation_floor = 1e-7;
};

/// Threshold used for a difference matrix of the given Frobenius norm.
double violation_threshold(double difference_norm, const CheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Instance checks

/// diag(g(y_{t_1 1}, .., y_{t_k k}))_{|t| = j mod l} <= g(x) L_{l^{k-1}}, where
/// L is the all-ones block pattern.
CheckReport check_monotone_instance(const ScalarFunction& g, const OperandTuple& x,
                                    const std::vector<Decomposition>& d,
                                    const MonotonicityIndex& idx, const CheckOptions& opts = {});

/// f(lambda x + (1 - lambda) y) <= lambda f(x) + (1 - lambda) f(y).
/// Eigenvalues below lo + 1e-6 at a closed lower endpoint are raised to it.
CheckReport check_convex_instance(const ScalarFunction& f, const std::vector<HermitianMatrix>& x,
                                  const std::vector<HermitianMatrix>& y, double lambda,
                                  const CheckOptions& opts = {});

/// diag(f(a_s* x a_s)) <= ((a_t* (x) ..) f(x) (a_s (x) ..))_{t,s}.
CheckReport jensen_unitary_check(const ScalarFunction& f, const OperandTuple& x,
                                 const std::vector<UnitaryRow>& rows,
                                 const MonotonicityIndex& idx, const CheckOptions& opts = {});

/// As jensen_unitary_check with a_{s i} replaced by projections p_{s i}.
CheckReport jensen_projection_check(const ScalarFunction& f, const OperandTuple& x,
                                    const std::vector<PartitionOfUnity>& parts,
                                    const MonotonicityIndex& idx, const CheckOptions& opts = {});

/// f(x) <= f(y) on the tensor space. Throws PreconditionError unless
/// 0 <= x_i <= y_i for every i.
CheckReport check_tensor_monotone(const ScalarFunction& f, const std::vector<HermitianMatrix>& x,
                                  const std::vector<HermitianMatrix>& y,
                                  const CheckOptions& opts = {});

/// g(r) >= -C / (r_1 .. r_k) on the logarithmic grid
/// r_i = box_i * 10^{-6 (m + 1) / grid}, m = 0 .. grid - 1.
/// The margin is the minimal slack g(r) + C / (r_1 .. r_k).
CheckReport growth_bound_check(const ScalarFunction& g, const std::vector<double>& box, double C,
                               int grid, const CheckOptions& opts = {});

/// The grid coordinates growth_bound_check uses along an axis of length `upper`.
std::vector<double> growth_grid(double upper, int grid);

// ---------------------------------------------------------------------------
// Randomized searches. Trial i draws from trial_stream(seed, i, salt); the
// first violating trial (lowest index) is reported with its witness,
// otherwise the minimum margin over all trials. A pass means no violation
// was found in `trials` trials, never a proof.

struct SearchOptions {
  CheckOptions check;
  unsigned threads = 1;
};

/// Eigenvalues log-uniform in [lo + 1e-2, lo + (hi - lo)(1 - 1e-2)], or
/// [lo + 1e-2, lo + 1e2] when hi is infinite, conjugated by a Haar unitary.
HermitianMatrix sample_operand(Eigen::Index n, const Interval& domain, Rng& rng);

CheckReport check_monotone_search(const ScalarFunction& g, const MonotonicityIndex& idx,
                                  const std::vector<Eigen::Index>& orders, std::size_t trials,
                                  std::uint64_t seed, const SearchOptions& opts = {});

CheckReport check_convex_search(const ScalarFunction& f, const std::vector<Eigen::Index>& orders,
                                std::size_t trials, std::uint64_t seed,
                                const SearchOptions& opts = {});

CheckReport jensen_unitary_search(const ScalarFunction& f, const MonotonicityIndex& idx,
                                  const std::vector<Eigen::Index>& orders, std::size_t trials,
                                  std::uint64_t seed, const SearchOptions& opts = {});

/// Requires orders[i] >= l (partitions have positive ranks).
CheckReport jensen_projection_search(const ScalarFunction& f, const MonotonicityIndex& idx,
                                     const std::vector<Eigen::Index>& orders, std::size_t trials,
                                     std::uint64_t seed, const SearchOptions& opts = {});

/// y_i sampled in the domain, x_i the first part of a random length-2
/// decomposition of y_i, so 0 < x_i < y_i.
CheckReport tensor_monotone_search(const ScalarFunction& f,
                                   const std::vector<Eigen::Index>& orders, std::size_t trials,
                                   std::uint64_t seed, const SearchOptions& opts = {});

}  // namespace loewner
