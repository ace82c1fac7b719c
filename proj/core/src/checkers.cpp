#include "loewner/checkers.hpp"

#include <cmath>
#include <limits>

#include "loewner/errors.hpp"
#include "loewner/tolerances.hpp"

namespace loewner {

std::string to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "violation"; }

double violation_threshold(double difference_norm, const CheckOptions& opts) {
  return std::max(opts.violation_floor, tol::kViolationRel * difference_norm);
}

namespace {

CheckReport verdict_for(const HermitianMatrix& difference, const CheckOptions& opts) {
  CheckReport r;
  r.margin = eig_hermitian(difference).eigenvalues(0);
  r.tolerance_used = violation_threshold(difference.frobenius(), opts);
  r.verdict = r.margin < -r.tolerance_used ? Verdict::Violation : Verdict::Pass;
  if (!r.violation() && r.margin < 0.0) r.dead_zone = 1;
  r.trials_run = 1;
  return r;
}

std::vector<Matrix> raw(const std::vector<HermitianMatrix>& ms) {
  std::vector<Matrix> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.push_back(m.matrix());
  return out;
}

Witness base_witness(const char* command, const ScalarFunction& f,
                     const std::vector<HermitianMatrix>& operands) {
  Witness w;
  w.command = command;
  w.function = f.source();
  w.domain = f.domain();
  w.k = f.arity();
  for (const auto& m : operands) w.orders.push_back(m.dim());
  w.operands = raw(operands);
  return w;
}

void require_arity(const ScalarFunction& f, std::size_t k, const char* who) {
  if (f.arity() != k) {
    throw DimensionMismatch(std::string(who) + ": function arity " + std::to_string(f.arity()) +
                            " does not match " + std::to_string(k) + " operands");
  }
}

// Raises eigenvalues within [lo - slack, lo + nudge) onto lo + nudge when the
// lower endpoint is closed. Leaves the matrix untouched otherwise.
HermitianMatrix nudge_from_boundary(const HermitianMatrix& m, const Interval& d) {
  if (!d.lo_closed) return m;
  const double floor = d.lo + tol::kBoundaryNudge;
  const double slack = tol::kClusterRel * m.scale();
  const EigenSystem es = eig_hermitian(m);
  if (es.eigenvalues(0) >= floor || es.eigenvalues(0) < d.lo - slack) return m;
  RealVector lam = es.eigenvalues;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < floor && lam(i) >= d.lo - slack) lam(i) = floor;
  }
  return HermitianMatrix::from_symmetrized(es.eigenvectors * lam.asDiagonal() *
                                           es.eigenvectors.adjoint());
}

}  // namespace

CheckReport check_monotone_instance(const ScalarFunction& g, const OperandTuple& x,
                                    const std::vector<Decomposition>& d,
                                    const MonotonicityIndex& idx, const CheckOptions& opts) {
  idx.validate();
  const std::size_t k = x.size();
  require_arity(g, k, "check_monotone_instance");
  if (d.size() != k) throw DimensionMismatch("check_monotone_instance: need one decomposition per operand");
  for (std::size_t i = 0; i < k; ++i) {
    if (d[i].length() != static_cast<std::size_t>(idx.l)) {
      throw DimensionMismatch("check_monotone_instance: decomposition length must equal l");
    }
    if (d[i].x.dim() != x[i].dim()) {
      throw DimensionMismatch("check_monotone_instance: decomposition dimension mismatch");
    }
  }

  const MultiIndexSet set = enumerate_multi_indices(k, idx.l, idx.j);
  const HermitianMatrix gx = apply_multivariate(g, x);
  const Eigen::Index n = gx.dim();

  std::vector<Matrix> lhs;
  lhs.reserve(set.size());
  for (const MultiIndex& t : set.indices) {
    std::vector<HermitianMatrix> args;
    for (std::size_t i = 0; i < k; ++i) args.push_back(d[i].parts[static_cast<std::size_t>(t[i] - 1)]);
    lhs.push_back(apply_multivariate(g, args).matrix());
  }

  const BlockMatrix diff = assemble_block(set.size(), n, [&](std::size_t p, std::size_t q) {
    return p == q ? Matrix(gx.matrix() - lhs[p]) : gx.matrix();
  });
  CheckReport r = verdict_for(diff.assemble_hermitian(), opts);
  if (r.violation()) {
    Witness w = base_witness("monotone", g, x.matrices());
    w.index = idx;
    for (const auto& di : d) w.decompositions.push_back(raw(di.parts));
    w.margin = r.margin;
    r.instance = std::move(w);
  }
  return r;
}

CheckReport check_convex_instance(const ScalarFunction& f, const std::vector<HermitianMatrix>& x,
                                  const std::vector<HermitianMatrix>& y, double lambda,
                                  const CheckOptions& opts) {
  const std::size_t k = x.size();
  require_arity(f, k, "check_convex_instance");
  if (y.size() != k) throw DimensionMismatch("check_convex_instance: x and y differ in length");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("check_convex_instance: lambda must lie in [0, 1]");

  std::vector<HermitianMatrix> xs;
  std::vector<HermitianMatrix> ys;
  std::vector<HermitianMatrix> mid;
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i].dim() != y[i].dim()) throw DimensionMismatch("check_convex_instance: operand dimensions differ");
    xs.push_back(nudge_from_boundary(x[i], f.domain()[i]));
    ys.push_back(nudge_from_boundary(y[i], f.domain()[i]));
    mid.push_back(HermitianMatrix::from_symmetrized(lambda * xs[i].matrix() +
                                                    (1.0 - lambda) * ys[i].matrix()));
  }

  const HermitianMatrix fx = apply_multivariate(f, xs);
  const HermitianMatrix fy = apply_multivariate(f, ys);
  const HermitianMatrix fm = apply_multivariate(f, mid);
  const HermitianMatrix diff = HermitianMatrix::from_symmetrized(
      lambda * fx.matrix() + (1.0 - lambda) * fy.matrix() - fm.matrix());

  CheckReport r = verdict_for(diff, opts);
  if (r.violation()) {
    Witness w = base_witness("convex", f, xs);
    w.operands_y = raw(ys);
    w.lambda = lambda;
    w.margin = r.margin;
    r.instance = std::move(w);
  }
  return r;
}

namespace {

// Shared body of the two Jensen forms: `ops[i][s]` is the operator a_{s i}
// (or p_{s i}); LHS uses ops* x ops, RHS the compressed f(x).
CheckReport jensen_common(const ScalarFunction& f, const OperandTuple& x,
                          const std::vector<std::vector<Matrix>>& ops, const MonotonicityIndex& idx,
                          const CheckOptions& opts) {
  idx.validate();
  const std::size_t k = x.size();
  require_arity(f, k, "jensen check");
  if (ops.size() != k) throw DimensionMismatch("jensen check: need one row/partition per operand");
  for (std::size_t i = 0; i < k; ++i) {
    if (ops[i].size() != static_cast<std::size_t>(idx.l)) {
      throw DimensionMismatch("jensen check: row/partition length must equal l");
    }
    for (const auto& a : ops[i]) {
      if (a.rows() != x[i].dim() || a.cols() != x[i].dim()) {
        throw DimensionMismatch("jensen check: operator dimension mismatch");
      }
    }
  }

  const MultiIndexSet set = enumerate_multi_indices(k, idx.l, idx.j);
  const HermitianMatrix fx = apply_multivariate(f, x);
  const Eigen::Index n = fx.dim();

  std::vector<Matrix> lifted;  // a_{s_1 1} (x) .. (x) a_{s_k k}
  std::vector<Matrix> lhs;
  for (const MultiIndex& s : set.indices) {
    std::vector<Matrix> factors;
    std::vector<HermitianMatrix> args;
    for (std::size_t i = 0; i < k; ++i) {
      const Matrix& a = ops[i][static_cast<std::size_t>(s[i] - 1)];
      factors.push_back(a);
      args.push_back(HermitianMatrix::from_symmetrized(a.adjoint() * x[i].matrix() * a));
    }
    lifted.push_back(kron_all(factors));
    lhs.push_back(apply_multivariate(f, args).matrix());
  }

  const BlockMatrix diff = assemble_block(set.size(), n, [&](std::size_t p, std::size_t q) {
    Matrix block = lifted[p].adjoint() * fx.matrix() * lifted[q];
    if (p == q) block -= lhs[p];
    return block;
  });
  return verdict_for(diff.assemble_hermitian(), opts);
}

}  // namespace

CheckReport jensen_unitary_check(const ScalarFunction& f, const OperandTuple& x,
                                 const std::vector<UnitaryRow>& rows,
                                 const MonotonicityIndex& idx, const CheckOptions& opts) {
  std::vector<std::vector<Matrix>> ops;
  for (const auto& r : rows) ops.push_back(r.entries);
  CheckReport r = jensen_common(f, x, ops, idx, opts);
  if (r.violation()) {
    Witness w = base_witness("jensen-unitary", f, x.matrices());
    w.index = idx;
    w.rows = ops;
    w.margin = r.margin;
    r.instance = std::move(w);
  }
  return r;
}

CheckReport jensen_projection_check(const ScalarFunction& f, const OperandTuple& x,
                                    const std::vector<PartitionOfUnity>& parts,
                                    const MonotonicityIndex& idx, const CheckOptions& opts) {
  std::vector<std::vector<Matrix>> ops;
  for (const auto& p : parts) ops.push_back(raw(p.projections));
  CheckReport r = jensen_common(f, x, ops, idx, opts);
  if (r.violation()) {
    Witness w = base_witness("jensen-projection", f, x.matrices());
    w.index = idx;
    w.partitions = ops;
    w.margin = r.margin;
    r.instance = std::move(w);
  }
  return r;
}

CheckReport check_tensor_monotone(const ScalarFunction& f, const std::vector<HermitianMatrix>& x,
                                  const std::vector<HermitianMatrix>& y, const CheckOptions& opts) {
  const std::size_t k = x.size();
  require_arity(f, k, "check_tensor_monotone");
  if (y.size() != k) throw DimensionMismatch("check_tensor_monotone: x and y differ in length");
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i].dim() != y[i].dim()) throw DimensionMismatch("check_tensor_monotone: operand dimensions differ");
    const PsdVerdict x_pos = is_psd(x[i]);
    if (!x_pos.is_psd) {
      throw PreconditionError("check_tensor_monotone: x_" + std::to_string(i + 1) +
                              " is not positive semidefinite (margin " +
                              std::to_string(x_pos.margin) + ")");
    }
    const PsdVerdict gap = is_psd(y[i] - x[i]);
    if (!gap.is_psd) {
      throw PreconditionError("check_tensor_monotone: x_" + std::to_string(i + 1) +
                              " <= y_" + std::to_string(i + 1) + " fails (margin " +
                              std::to_string(gap.margin) + ")");
    }
  }
  const HermitianMatrix diff = apply_multivariate(f, y) - apply_multivariate(f, x);
  CheckReport r = verdict_for(diff, opts);
  if (r.violation()) {
    Witness w = base_witness("tensor-monotone", f, x);
    w.operands_y = raw(y);
    w.margin = r.margin;
    r.instance = std::move(w);
  }
  return r;
}

std::vector<double> growth_grid(double upper, int grid) {
  if (grid < 1) throw ConfigError("growth grid needs at least one point per axis");
  if (!(upper > 0.0) || !std::isfinite(upper)) throw ConfigError("growth box bounds must be positive and finite");
  std::vector<double> pts;
  for (int m = 0; m < grid; ++m) {
    pts.push_back(upper * std::pow(10.0, -6.0 * (m + 1) / grid));
  }
  return pts;
}

CheckReport growth_bound_check(const ScalarFunction& g, const std::vector<double>& box, double C,
                               int grid, const CheckOptions& opts) {
  const std::size_t k = g.arity();
  if (box.size() != k) throw DimensionMismatch("growth_bound_check: box must have one bound per variable");
  if (!(C >= 0.0)) throw ConfigError("growth_bound_check: C must be non-negative");

  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < k; ++i) {
    axes.push_back(growth_grid(box[i], grid));
    for (double v : axes.back()) {
      if (!g.domain()[i].contains(v)) {
        throw DomainError("growth_bound_check: grid point " + std::to_string(v) +
                          " outside the domain of r" + std::to_string(i + 1));
      }
    }
  }

  CheckReport r;
  r.margin = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(k, 0);
  std::vector<double> point(k);
  std::vector<double> worst;
  double worst_scale = 1.0;
  for (;;) {
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      point[i] = axes[i][idx[i]];
      prod = prod * point[i];
    }
    const double value = g.eval(point);
    const double bound = C / prod;
    const double slack = value + bound;
    // Slack is compared relative to the magnitudes that produced it.
    const double scale = std::max({1.0, std::abs(value), std::abs(bound)});
    if (slack < r.margin) {
      r.margin = slack;
      worst = point;
      worst_scale = scale;
    }
    ++r.trials_run;

    std::size_t i = k;
    for (;;) {
      if (i == 0) break;
      --i;
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
      if (i == 0) {
        i = k + 1;
        break;
      }
    }
    if (i == k + 1) break;
  }

  r.tolerance_used = std::max(opts.violation_floor, tol::kViolationRel * worst_scale);
  r.verdict = r.margin < -r.tolerance_used ? Verdict::Violation : Verdict::Pass;
  r.point = worst;
  Witness w;
  w.command = "growth";
  w.function = g.source();
  w.domain = g.domain();
  w.k = k;
  w.point = worst;
  w.growth_constant = C;
  w.margin = r.margin;
  w.orders.assign(k, 1);
  if (r.violation()) r.instance = std::move(w);
  return r;
}

}  // namespace loewner
