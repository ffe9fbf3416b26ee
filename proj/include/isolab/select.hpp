#ifndef ISOLAB_SELECT_HPP
#define ISOLAB_SELECT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "isolab/eig.hpp"
#include "isolab/error.hpp"
#include "isolab/family.hpp"
#include "isolab/matrix.hpp"
#include "isolab/measure.hpp"
#include "isolab/subset.hpp"

namespace isolab {

struct SelectionResult {
  SubsetMask chosen;
  double mu_value = 0.0;
  double bound_rhs = 0.0;   // eps^2 sum_i mu_i |T e_i|^2
  double empirical_c = std::numeric_limits<double>::quiet_NaN();  // NaN when rhs = 0
  std::string method;
};

namespace detail {

inline void require_subunit_norm(const Matrix& t) {
  const double norm = operator_norm(t);
  if (norm > 1.0 + 1e-9)
    throw Error(ErrorKind::invalid_input,
                "operator norm " + format_double(norm) +
                    " exceeds 1: normalize the operator first");
}

inline double selection_rhs(const Matrix& t, double epsilon, const IndexMeasure& mu) {
  double s = 0.0;
  for (int i = 0; i < t.cols(); ++i) {
    const double cn = t.column_norm(i);
    s += mu.weights[static_cast<std::size_t>(i)] * cn * cn;
  }
  return epsilon * epsilon * s;
}

inline SelectionResult make_result(const Matrix& t, double epsilon,
                                   const IndexMeasure& mu, SubsetMask chosen,
                                   std::string method) {
  SelectionResult r;
  r.chosen = chosen;
  r.mu_value = mu.mass(chosen);
  r.bound_rhs = selection_rhs(t, epsilon, mu);
  if (r.bound_rhs > 0.0) r.empirical_c = r.mu_value / r.bound_rhs;
  r.method = std::move(method);
  return r;
}

}  // namespace detail

// Exact maximizer of mu(sigma) over the enumerated family. The objective is
// monotone, so the maximum is attained on a maximal set (extended by the
// free indices); ties break to the lexicographically smallest set.
inline SelectionResult select_exhaustive(const Matrix& t, double epsilon,
                                         const IndexMeasure& mu,
                                         double tol = kBoundaryTol) {
  mu.validate(t.cols());
  detail::require_subunit_norm(t);
  const IsoFamily family = enumerate_isomorphism_family(t, epsilon, tol);
  SubsetMask best;
  double best_mass = -1.0;
  for (const SubsetMask& m : family.maximal_sets) {
    const SubsetMask full = m.set_union(family.free_indices);
    const double mass = mu.mass(full);
    if (mass > best_mass ||
        (mass == best_mass && lex_less(full, best)))
      best = full, best_mass = mass;
  }
  return detail::make_result(t, epsilon, mu, best, "exhaustive");
}

// Greedy heuristic: repeatedly add the index of largest weight (ties to the
// lowest index) whose addition keeps the set a member. Downward closure
// makes a blocked index blocked forever, so one pass over the candidates
// ordered by weight realizes the rule; the result is a maximal member.
inline SelectionResult select_greedy(const Matrix& t, double epsilon,
                                     const IndexMeasure& mu,
                                     double tol = kBoundaryTol) {
  mu.validate(t.cols());
  detail::require_subunit_norm(t);
  std::vector<int> order(static_cast<std::size_t>(t.cols()));
  for (int i = 0; i < t.cols(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mu.weights[static_cast<std::size_t>(a)] > mu.weights[static_cast<std::size_t>(b)];
  });
  SubsetMask sigma(t.cols());
  for (int i : order)
    if (check_isomorphism(t, epsilon, sigma.with(i), tol)) sigma = sigma.with(i);
  return detail::make_result(t, epsilon, mu, sigma, "greedy");
}

// Ratios reported against the selection bounds; a field is left empty when
// its hypothesis does not apply (non-counting measure, non-unit columns, or
// a vanishing right-hand side).
struct SelectionReports {
  std::optional<double> eq4;    // mu(sigma) / (eps^2 sum mu_i |T e_i|^2)
  std::optional<double> eq6;    // counting measure: |sigma| / (eps^2 |T|_HS^2)
  std::optional<double> thm14;  // unit columns + counting: |sigma| |T|^2 / n
  std::optional<double> cor15;  // unit columns: mu(sigma) |T|^2 / eps^2
  std::optional<bool> eq5_confirmed;  // unit columns: spectral two-sided bound
};

inline SelectionReports bound_reports(const Matrix& t, double epsilon,
                                      const IndexMeasure& mu,
                                      const SelectionResult& result,
                                      double tol = kBoundaryTol) {
  mu.validate(t.cols());
  if (!check_isomorphism(t, epsilon, result.chosen, tol))
    throw Error(ErrorKind::invalid_input,
                "selection result failed independent membership verification");
  SelectionReports rep;
  const double rhs = detail::selection_rhs(t, epsilon, mu);
  const double mass = mu.mass(result.chosen);
  if (rhs > 0.0) rep.eq4 = mass / rhs;

  const double hs = hs_norm(t);
  if (mu.kind == MeasureKind::counting && hs > 0.0)
    rep.eq6 = result.chosen.size() / (epsilon * epsilon * hs * hs);

  bool unit_columns = t.cols() > 0;
  for (int i = 0; i < t.cols() && unit_columns; ++i)
    if (std::abs(t.column_norm(i) - 1.0) > 1e-12) unit_columns = false;
  if (unit_columns) {
    const double norm = operator_norm(t);
    rep.cor15 = mass * norm * norm / (epsilon * epsilon);
    if (mu.kind == MeasureKind::counting)
      rep.thm14 = result.chosen.size() * norm * norm / t.cols();
    // Two-sided bound (1-eps)|f| <= |Tf| <= (1+eps)|f| on the chosen span.
    bool ok = true;
    if (!result.chosen.empty()) {
      const Matrix cols = column_submatrix(t, result.chosen);
      Matrix g(cols.cols(), cols.cols());
      for (int i = 0; i < cols.cols(); ++i)
        for (int j = i; j < cols.cols(); ++j) {
          const double v = cols.column_dot(i, j);
          g(i, j) = v;
          g(j, i) = v;
        }
      const Spectrum sp = sym_eigs(g);
      ok = std::sqrt(std::max(sp.min(), 0.0)) >= 1.0 - epsilon - tol &&
           std::sqrt(std::max(sp.max(), 0.0)) <= 1.0 + epsilon + tol;
    }
    rep.eq5_confirmed = ok;
  }
  return rep;
}

}  // namespace isolab

#endif  // ISOLAB_SELECT_HPP
