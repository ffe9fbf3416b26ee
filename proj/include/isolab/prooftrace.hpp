#ifndef ISOLAB_PROOFTRACE_HPP
#define ISOLAB_PROOFTRACE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "isolab/eig.hpp"
#include "isolab/error.hpp"
#include "isolab/family.hpp"
#include "isolab/matrix.hpp"
#include "isolab/measure.hpp"
#include "isolab/subset.hpp"

namespace isolab {

struct NormalizedOperator {
  Matrix matrix;
  double scale = 1.0;  // factor applied to the input
  bool was_scaled = false;
};

// Scales the operator to norm one. Inputs already at norm one (within 1e-9)
// pass through unchanged.
inline NormalizedOperator normalize_operator(const Matrix& t) {
  if (t.empty() || t.is_zero())
    throw Error(ErrorKind::degenerate, "cannot normalize the zero operator");
  const double norm = operator_norm(t);
  NormalizedOperator out;
  if (std::abs(norm - 1.0) <= 1e-9) {
    out.matrix = t;
    return out;
  }
  out.scale = 1.0 / norm;
  out.matrix = t.scaled(out.scale);
  out.was_scaled = true;
  return out;
}

struct ColumnNormalized {
  Matrix matrix;
  SubsetMask zero_cols;  // carried through unchanged
};

// Rescales every nonzero column to unit norm; zero columns are flagged and
// passed through.
inline ColumnNormalized normalize_columns(const Matrix& t) {
  ColumnNormalized out;
  out.matrix = t;
  out.zero_cols = SubsetMask(t.cols());
  for (int j = 0; j < t.cols(); ++j) {
    const double cn = t.column_norm(j);
    if (cn == 0.0) {
      out.zero_cols = out.zero_cols.with(j);
      continue;
    }
    for (int i = 0; i < t.rows(); ++i) out.matrix(i, j) /= cn;
  }
  return out;
}

namespace detail {

inline void require_unit_or_zero_columns(const Matrix& t1) {
  for (int j = 0; j < t1.cols(); ++j) {
    const double cn = t1.column_norm(j);
    if (cn != 0.0 && std::abs(cn - 1.0) > 1e-9)
      throw Error(ErrorKind::invalid_input,
                  "column " + std::to_string(j) + " has norm " +
                      format_double(cn) + ", expected unit or zero");
  }
}

// Largest-mu maximal set of an enumerated family, ties lexicographic.
inline SubsetMask best_maximal(const IsoFamily& family, const IndexMeasure& mu) {
  SubsetMask best(family.n);
  double best_mass = -1.0;
  for (const SubsetMask& m : family.maximal_sets) {
    const double mass = mu.mass(m);
    if (mass > best_mass || (mass == best_mass && lex_less(m, best))) {
      best = m;
      best_mass = mass;
    }
  }
  return best;
}

}  // namespace detail

// Largest-mu subset sigma with |T1 Q_sigma| <= C + tol, over the unit
// columns of T1 (zero columns are never candidates). Exhaustive for up to 24
// candidate columns, greedy with the same admissibility test above that.
inline SubsetMask szarek_step(const Matrix& t1, const IndexMeasure& mu,
                              double c_bound, double tol = kBoundaryTol) {
  if (!(c_bound > 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "norm bound C must exceed 1, got " + format_double(c_bound));
  mu.validate(t1.cols());
  detail::require_unit_or_zero_columns(t1);
  const int n = t1.cols();
  const SubsetMask zero = zero_columns(t1);
  const int candidates = n - zero.size();
  if (candidates == 0) return SubsetMask(n);

  auto admissible = [&](const SubsetMask& sigma) {
    if (sigma.size() <= 1) return true;
    return operator_norm(column_submatrix(t1, sigma)) <= c_bound + tol;
  };

  SubsetMask sigma(n);
  if (candidates <= kEnumerationCap) {
    const IsoFamily family =
        enumerate_family(admissible, n, FamilyKind::suppression, c_bound, zero);
    sigma = detail::best_maximal(family, mu);
  } else {
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
      if (!zero.contains(i)) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return mu.weights[static_cast<std::size_t>(a)] > mu.weights[static_cast<std::size_t>(b)];
    });
    for (int i : order)
      if (admissible(sigma.with(i))) sigma = sigma.with(i);
  }
  if (sigma.empty())
    throw Error(ErrorKind::numeric_failure,
                "internal invariant: no admissible set although singletons have norm 1");
  return sigma;
}

// S = T2^T T2 - I over the restricted columns. Unit columns force a zero
// diagonal; a violation names the offending column.
inline Matrix build_zero_diag(const Matrix& t2cols) {
  const int k = t2cols.cols();
  Matrix s(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double v = t2cols.column_dot(i, j);
      if (i == j) v -= 1.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  for (int i = 0; i < k; ++i)
    if (std::abs(s(i, i)) > 1e-12)
      throw Error(ErrorKind::diagonal_violation,
                  "diagonal entry " + std::to_string(i) + " is " +
                      format_double(s(i, i)) + ": column " + std::to_string(i) +
                      " is not normalized");
  return s;
}

// Largest-mu subset sigma' with |Q_sigma' S Q_sigma'| <= delta |S| + tol,
// found exhaustively over the enumerated suppression family.
inline SubsetMask suppression_step(const Matrix& s, double delta,
                                   const IndexMeasure& mu,
                                   double tol = kBoundaryTol) {
  mu.validate(s.rows());
  if (s.rows() > kEnumerationCap)
    throw Error(ErrorKind::size_cap,
                "suppression search dimension " + std::to_string(s.rows()) +
                    " exceeds cap " + std::to_string(kEnumerationCap));
  const IsoFamily family = enumerate_suppression_family(s, delta, tol);
  return detail::best_maximal(family, mu);
}

struct LedgerEntry {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ProofTrace {
  Matrix input;             // operator before normalization
  double scale = 1.0;       // applied to reach norm one
  double epsilon = 0.0;
  double c_bound = 0.0;
  SubsetMask zero_cols;     // free indices of the input
  SubsetMask sigma1;        // norm-reduction step output
  SubsetMask sigma2;        // suppression step output, subset of sigma1
  SubsetMask sigma_final;   // sigma2 plus the free indices
  double t2_norm = 0.0;
  Matrix s;                 // zero-diagonal operator on sigma1
  double s_norm = 0.0;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double mu_final = 0.0;
  bool short_circuited = false;
  std::vector<LedgerEntry> checks;

  bool passed() const {
    for (const LedgerEntry& e : checks)
      if (!e.pass) return false;
    return true;
  }
};

namespace detail {

inline void record(ProofTrace& trace, const std::string& label, double lhs,
                   double rhs, bool pass) {
  trace.checks.push_back(LedgerEntry{label, lhs, rhs, pass});
}

}  // namespace detail

// Executes the whole reduction: scale to norm one, normalize columns, pick a
// norm-bounded subset, form the zero-diagonal operator, suppress it, and
// re-verify the final set with the independent membership checker. Every
// intermediate inequality lands in the ledger; a failed check marks the
// trace failed rather than passing silently.
inline ProofTrace run_pipeline(const Matrix& t, double epsilon,
                               const IndexMeasure& mu, double c_bound = 2.0,
                               double tol = kBoundaryTol) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "epsilon must lie in (0,1), got " + format_double(epsilon));
  if (!(c_bound > 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "norm bound C must exceed 1, got " + format_double(c_bound));
  mu.validate(t.cols());

  ProofTrace trace;
  trace.input = t;
  trace.epsilon = epsilon;
  trace.c_bound = c_bound;

  const NormalizedOperator norm_op = normalize_operator(t);
  trace.scale = norm_op.scale;
  const ColumnNormalized nc = normalize_columns(norm_op.matrix);
  trace.zero_cols = nc.zero_cols;

  trace.sigma1 = szarek_step(nc.matrix, mu, c_bound, tol);

  // Mass ratio achieved by the norm-reduction step; vacuous when mu ignores
  // every candidate column.
  double denom7 = 0.0;
  for (int i = 0; i < t.cols(); ++i)
    if (!nc.zero_cols.contains(i)) denom7 += mu.weights[static_cast<std::size_t>(i)];
  const double ratio7 = denom7 > 0.0 ? mu.mass(trace.sigma1) / denom7
                                     : std::numeric_limits<double>::quiet_NaN();
  detail::record(trace, "eq7", ratio7, 0.0, denom7 == 0.0 || ratio7 > 0.0);

  const Matrix t2cols = column_submatrix(nc.matrix, trace.sigma1);
  trace.t2_norm = operator_norm(t2cols);
  detail::record(trace, "eq10", trace.t2_norm, c_bound + tol,
                 trace.t2_norm <= c_bound + tol);

  trace.s = build_zero_diag(t2cols);
  double max_diag = 0.0;
  for (int i = 0; i < trace.s.rows(); ++i)
    max_diag = std::max(max_diag, std::abs(trace.s(i, i)));
  detail::record(trace, "eq11", max_diag, 1e-12, max_diag <= 1e-12);
  trace.s_norm = operator_norm(trace.s);
  detail::record(trace, "eq11-norm", trace.s_norm,
                 trace.t2_norm * trace.t2_norm + 1.0 + tol,
                 trace.s_norm <= trace.t2_norm * trace.t2_norm + 1.0 + tol);

  const int k = trace.s.rows();
  SubsetMask sigma2_local;
  if (trace.s_norm <= epsilon) {
    // delta = eps/|S| would be >= 1 and the suppression condition vacuous:
    // |<Sf,f>| <= |S| <= eps already, so sigma1 itself qualifies.
    trace.short_circuited = true;
    sigma2_local = SubsetMask::full(k);
    detail::record(trace, "quadform", trace.s_norm, epsilon + tol,
                   trace.s_norm <= epsilon + tol);
  } else {
    trace.delta = epsilon / trace.s_norm;
    detail::record(trace, "eq12", trace.delta,
                   epsilon / (c_bound * c_bound + 1.0) - tol,
                   trace.delta >= epsilon / (c_bound * c_bound + 1.0) - tol);

    std::vector<double> mu_local(static_cast<std::size_t>(k));
    const std::vector<int> sigma1_idx = trace.sigma1.indices();
    for (int p = 0; p < k; ++p)
      mu_local[static_cast<std::size_t>(p)] =
          mu.weights[static_cast<std::size_t>(sigma1_idx[static_cast<std::size_t>(p)])];
    sigma2_local = suppression_step(trace.s, trace.delta,
                                    IndexMeasure::general(std::move(mu_local)), tol);

    detail::record(trace, "delta-def", std::abs(trace.delta * trace.s_norm - epsilon),
                   1e-12, std::abs(trace.delta * trace.s_norm - epsilon) <= 1e-12);

    // Quadratic form at the extremal eigenvectors of the suppressed block.
    double quad = 0.0;
    const Matrix block = principal_submatrix(trace.s, sigma2_local);
    if (!block.empty()) {
      const Spectrum sp = sym_eigs(block);
      for (int which : {0, block.rows() - 1}) {
        double v = 0.0;
        for (int a = 0; a < block.rows(); ++a)
          for (int b = 0; b < block.rows(); ++b)
            v += sp.vectors(a, which) * block(a, b) * sp.vectors(b, which);
        quad = std::max(quad, std::abs(v));
      }
    }
    detail::record(trace, "quadform", quad, epsilon + 2.0 * tol,
                   quad <= epsilon + 2.0 * tol);
  }

  SubsetMask sigma2(t.cols());
  const std::vector<int> sigma1_idx = trace.sigma1.indices();
  for (int p : sigma2_local.indices())
    sigma2 = sigma2.with(sigma1_idx[static_cast<std::size_t>(p)]);
  trace.sigma2 = sigma2;
  trace.sigma_final = sigma2.set_union(trace.zero_cols);
  trace.mu_final = mu.mass(trace.sigma_final);

  // Independent re-verification on the original operator: the spectral
  // deviation of the normalized Gram over the final set must stay within
  // epsilon. This is never inferred from the ledger above.
  const SubsetMask active = trace.sigma_final.set_minus(zero_columns(t));
  double deviation = 0.0;
  if (active.size() > 1) {
    const Spectrum sp = sym_eigs(gram_normalized(t, active));
    deviation = std::max(std::abs(sp.min() - 1.0), std::abs(sp.max() - 1.0));
  }
  detail::record(trace, "final-eq1", deviation, epsilon + tol,
                 deviation <= epsilon + tol);

  double denom4 = 0.0;
  for (int i = 0; i < t.cols(); ++i) {
    const double cn = norm_op.matrix.column_norm(i);
    denom4 += mu.weights[static_cast<std::size_t>(i)] * cn * cn;
  }
  denom4 *= epsilon * epsilon;
  const double ratio4 = denom4 > 0.0 ? trace.mu_final / denom4
                                     : std::numeric_limits<double>::quiet_NaN();
  detail::record(trace, "eq4-ratio", ratio4, 0.0, denom4 == 0.0 || ratio4 > 0.0);

  return trace;
}

}  // namespace isolab

#endif  // ISOLAB_PROOFTRACE_HPP
