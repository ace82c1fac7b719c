#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "loewner/checkers.hpp"
#include "loewner/errors.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

namespace {

// Stream salts keep the searches' random streams disjoint for a shared seed.
constexpr std::uint64_t kSaltMonotone = 0x6d6f6e6fULL;
constexpr std::uint64_t kSaltConvex = 0x636f6e76ULL;
constexpr std::uint64_t kSaltJensenRow = 0x6a726f77ULL;
constexpr std::uint64_t kSaltJensenProj = 0x6a70726fULL;
constexpr std::uint64_t kSaltTensor = 0x74656e73ULL;

using TrialFn = std::function<CheckReport(Rng&)>;

// Runs trials in batches of `threads`; each batch is scanned in index order,
// so the outcome never depends on the thread count.
CheckReport run_search(std::size_t trials, std::uint64_t seed, std::uint64_t salt,
                       const SearchOptions& opts, const TrialFn& trial_fn) {
  if (trials == 0) throw ConfigError("search: trials must be positive");
  const std::size_t batch = std::max<unsigned>(1, opts.threads);

  CheckReport best;
  best.margin = std::numeric_limits<double>::infinity();
  best.seed = seed;
  std::size_t dead_zone = 0;

  std::vector<CheckReport> results(batch);
  std::vector<std::exception_ptr> errors(batch);
  for (std::size_t start = 0; start < trials; start += batch) {
    const std::size_t count = std::min(batch, trials - start);
    auto work = [&](std::size_t slot) {
      try {
        Rng rng = trial_stream(seed, start + slot, salt);
        results[slot] = trial_fn(rng);
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    };
    if (count == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t s = 0; s < count; ++s) pool.emplace_back(work, s);
      for (auto& t : pool) t.join();
    }

    for (std::size_t s = 0; s < count; ++s) {
      if (errors[s]) std::rethrow_exception(errors[s]);
      CheckReport& r = results[s];
      const std::uint64_t index = start + s;
      dead_zone += r.dead_zone;
      if (r.violation()) {
        r.seed = seed;
        r.trial = index;
        r.trials_run = index + 1;
        r.dead_zone = dead_zone;
        if (r.instance) {
          r.instance->seed = seed;
          r.instance->trial = index;
        }
        return r;
      }
      if (r.margin < best.margin) {
        best.margin = r.margin;
        best.tolerance_used = r.tolerance_used;
        best.trial = index;
      }
    }
  }
  best.verdict = Verdict::Pass;
  best.trials_run = trials;
  best.dead_zone = dead_zone;
  return best;
}

void require_orders(const ScalarFunction& f, const std::vector<Eigen::Index>& orders,
                    const char* who) {
  if (orders.size() != f.arity()) {
    throw DimensionMismatch(std::string(who) + ": expected " + std::to_string(f.arity()) +
                            " orders, got " + std::to_string(orders.size()));
  }
  for (Eigen::Index n : orders) {
    if (n < 1) throw ConfigError(std::string(who) + ": orders must be positive");
  }
}

std::vector<HermitianMatrix> sample_operands(const ScalarFunction& f,
                                             const std::vector<Eigen::Index>& orders, Rng& rng) {
  std::vector<HermitianMatrix> x;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    x.push_back(sample_operand(orders[i], f.domain()[i], rng));
  }
  return x;
}

}  // namespace

HermitianMatrix sample_operand(Eigen::Index n, const Interval& domain, Rng& rng) {
  constexpr double kInset = 1e-2;
  constexpr double kReach = 1e2;
  const bool lo_finite = std::isfinite(domain.lo);
  const bool hi_finite = std::isfinite(domain.hi);
  const double width = hi_finite && lo_finite ? domain.hi - domain.lo : kReach;
  const double top = hi_finite && lo_finite ? width * (1.0 - kInset) : kReach;
  if (!(top > kInset)) {
    throw ConfigError("sample_operand: domain " + domain.to_string() + " is too narrow to sample");
  }

  std::vector<double> values(static_cast<std::size_t>(n));
  for (double& v : values) {
    const double offset = log_uniform(kInset, top, rng);
    if (lo_finite) {
      v = domain.lo + offset;
    } else if (hi_finite) {
      v = domain.hi - offset;
    } else {
      v = std::uniform_int_distribution<int>(0, 1)(rng) ? offset : -offset;
    }
  }
  return random_with_spectrum(values, rng);
}

CheckReport check_monotone_search(const ScalarFunction& g, const MonotonicityIndex& idx,
                                  const std::vector<Eigen::Index>& orders, std::size_t trials,
                                  std::uint64_t seed, const SearchOptions& opts) {
  idx.validate();
  require_orders(g, orders, "check_monotone_search");
  return run_search(trials, seed, kSaltMonotone, opts, [&](Rng& rng) {
    std::vector<HermitianMatrix> x = sample_operands(g, orders, rng);
    std::vector<Decomposition> d;
    for (const auto& xi : x) d.push_back(sample_decomposition(xi, idx.l, rng));
    return check_monotone_instance(g, OperandTuple(std::move(x)), d, idx, opts.check);
  });
}

CheckReport check_convex_search(const ScalarFunction& f, const std::vector<Eigen::Index>& orders,
                                std::size_t trials, std::uint64_t seed,
                                const SearchOptions& opts) {
  require_orders(f, orders, "check_convex_search");
  return run_search(trials, seed, kSaltConvex, opts, [&](Rng& rng) {
    std::vector<HermitianMatrix> x = sample_operands(f, orders, rng);
    std::vector<HermitianMatrix> y = sample_operands(f, orders, rng);
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return check_convex_instance(f, x, y, lambda, opts.check);
  });
}

CheckReport jensen_unitary_search(const ScalarFunction& f, const MonotonicityIndex& idx,
                                  const std::vector<Eigen::Index>& orders, std::size_t trials,
                                  std::uint64_t seed, const SearchOptions& opts) {
  idx.validate();
  require_orders(f, orders, "jensen_unitary_search");
  return run_search(trials, seed, kSaltJensenRow, opts, [&](Rng& rng) {
    std::vector<HermitianMatrix> x = sample_operands(f, orders, rng);
    std::vector<UnitaryRow> rows;
    for (Eigen::Index n : orders) rows.push_back(sample_unitary_row(n, idx.l, rng));
    return jensen_unitary_check(f, OperandTuple(std::move(x)), rows, idx, opts.check);
  });
}

CheckReport jensen_projection_search(const ScalarFunction& f, const MonotonicityIndex& idx,
                                     const std::vector<Eigen::Index>& orders, std::size_t trials,
                                     std::uint64_t seed, const SearchOptions& opts) {
  idx.validate();
  require_orders(f, orders, "jensen_projection_search");
  for (Eigen::Index n : orders) {
    if (n < idx.l) {
      throw ConfigError("jensen_projection_search: every order must be at least l = " +
                        std::to_string(idx.l));
    }
  }
  return run_search(trials, seed, kSaltJensenProj, opts, [&](Rng& rng) {
    std::vector<HermitianMatrix> x = sample_operands(f, orders, rng);
    std::vector<PartitionOfUnity> parts;
    for (Eigen::Index n : orders) parts.push_back(sample_partition_of_unity(n, idx.l, rng));
    return jensen_projection_check(f, OperandTuple(std::move(x)), parts, idx, opts.check);
  });
}

CheckReport tensor_monotone_search(const ScalarFunction& f,
                                   const std::vector<Eigen::Index>& orders, std::size_t trials,
                                   std::uint64_t seed, const SearchOptions& opts) {
  require_orders(f, orders, "tensor_monotone_search");
  return run_search(trials, seed, kSaltTensor, opts, [&](Rng& rng) {
    std::vector<HermitianMatrix> y = sample_operands(f, orders, rng);
    std::vector<HermitianMatrix> x;
    for (const auto& yi : y) x.push_back(sample_decomposition(yi, 2, rng).parts.front());
    return check_tensor_monotone(f, x, y, opts.check);
  });
}

}  // namespace loewner
