#ifndef ISOLAB_WITNESS_HPP
#define ISOLAB_WITNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isolab/error.hpp"
#include "isolab/family.hpp"
#include "isolab/lp.hpp"
#include "isolab/matrix.hpp"
#include "isolab/subset.hpp"

namespace isolab {

// Max-min marginal game over a downward-closed family: the column player
// mixes over member sets, the row player over indices, and the payoff
// against set sigma in row i is chi_sigma(i) / w_i. Because the payoff is
// monotone in sigma and the family is downward closed, mixing over the
// maximal sets only loses nothing.
struct MarginalGame {
  IsoFamily family;
  std::vector<double> weights;   // length n, >= 0
  std::vector<int> active_rows;  // indices with weight > 0
};

struct WitnessMeasure {
  std::vector<std::pair<SubsetMask, double>> support;  // member set, probability
  double floor = 0.0;                 // min over active rows of marginal/w
  std::vector<double> dual_lambda;    // length n, probability on active rows
  double gap = 0.0;                   // dual certificate minus floor
  std::vector<double> marginals;      // length n, recomputed from support
};

class NoCertificateError : public Error {
 public:
  NoCertificateError(const std::string& message, WitnessMeasure best)
      : Error(ErrorKind::no_certificate, message), best_(std::move(best)) {}
  const WitnessMeasure& best() const { return best_; }

 private:
  WitnessMeasure best_;
};

inline MarginalGame build_game(const IsoFamily& family,
                               const std::vector<double>& weights) {
  if (weights.size() != static_cast<std::size_t>(family.n))
    throw Error(ErrorKind::dimension_mismatch,
                "weight vector length " + std::to_string(weights.size()) +
                    " does not match dimension " + std::to_string(family.n));
  MarginalGame g;
  g.family = family;
  g.weights = weights;
  for (int i = 0; i < family.n; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorKind::invalid_input,
                  "weight " + std::to_string(i) + " must be finite and nonnegative");
    if (w > 0.0) g.active_rows.push_back(i);
  }
  if (g.active_rows.empty())
    throw Error(ErrorKind::degenerate, "all weights are zero: the game is empty");
  return g;
}

struct SolveOptions {
  std::size_t column_cap = 100000;  // tableau width cap; beyond it, columns
                                    // are generated on demand
  long iteration_cap = 2'000'000;
  double gap_tol = 1e-9;
};

namespace detail {

inline std::vector<double> game_column(const MarginalGame& g, const SubsetMask& set) {
  std::vector<double> col(g.active_rows.size(), 0.0);
  for (std::size_t r = 0; r < g.active_rows.size(); ++r) {
    const int i = g.active_rows[r];
    if (set.contains(i)) col[r] = 1.0 / g.weights[static_cast<std::size_t>(i)];
  }
  return col;
}

inline WitnessMeasure assemble(const MarginalGame& g,
                               const std::vector<int>& col_ids,
                               const std::vector<double>& x,
                               const std::vector<double>& y) {
  const int n = g.family.n;
  WitnessMeasure w;
  double x_total = 0.0;
  for (double v : x) x_total += v;
  if (x_total <= 0.0)
    throw Error(ErrorKind::no_certificate, "solver returned an empty measure");
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] > 0.0)
      w.support.emplace_back(g.family.maximal_sets[static_cast<std::size_t>(col_ids[j])],
                             x[j] / x_total);

  w.marginals.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& [set, p] : w.support)
    for (int i : set.indices()) w.marginals[static_cast<std::size_t>(i)] += p;

  w.floor = std::numeric_limits<double>::infinity();
  for (int i : g.active_rows)
    w.floor = std::min(w.floor, w.marginals[static_cast<std::size_t>(i)] /
                                    g.weights[static_cast<std::size_t>(i)]);

  double y_total = 0.0;
  for (double v : y) y_total += v;
  w.dual_lambda.assign(static_cast<std::size_t>(n), 0.0);
  if (y_total > 0.0)
    for (std::size_t r = 0; r < g.active_rows.size(); ++r)
      w.dual_lambda[static_cast<std::size_t>(g.active_rows[r])] = y[r] / y_total;

  // Dual certificate: the best payoff against lambda over every maximal set
  // bounds the value over the whole family.
  double best = 0.0;
  for (const SubsetMask& set : g.family.maximal_sets) {
    double v = 0.0;
    for (int i : g.active_rows)
      if (set.contains(i))
        v += w.dual_lambda[static_cast<std::size_t>(i)] / g.weights[static_cast<std::size_t>(i)];
    best = std::max(best, v);
  }
  w.gap = std::max(best - w.floor, 0.0);
  return w;
}

}  // namespace detail

// Solves the game exactly: returns the witness measure nu maximizing the
// marginal floor t = min_i nu{set contains i} / w_i together with a dual
// probability lambda certifying optimality. The duality gap is recomputed
// from scratch and must close within gap_tol; otherwise a no-certificate
// error carrying the best primal/dual pair is thrown.
inline WitnessMeasure solve_game(const MarginalGame& g, const SolveOptions& opt = {}) {
  const std::size_t n_cols = g.family.maximal_sets.size();
  if (g.active_rows.empty() || n_cols == 0)
    throw Error(ErrorKind::degenerate, "game needs at least one active row and one column");
  const int m = static_cast<int>(g.active_rows.size());

  // A row no column covers pins the value at zero; certify directly.
  for (int i : g.active_rows) {
    bool covered = false;
    for (const SubsetMask& set : g.family.maximal_sets)
      if (set.contains(i)) {
        covered = true;
        break;
      }
    if (!covered) {
      WitnessMeasure w;
      w.support.emplace_back(g.family.maximal_sets.front(), 1.0);
      w.marginals.assign(static_cast<std::size_t>(g.family.n), 0.0);
      for (int j : g.family.maximal_sets.front().indices())
        w.marginals[static_cast<std::size_t>(j)] = 1.0;
      w.dual_lambda.assign(static_cast<std::size_t>(g.family.n), 0.0);
      w.dual_lambda[static_cast<std::size_t>(i)] = 1.0;
      w.floor = 0.0;
      w.gap = 0.0;
      return w;
    }
  }

  std::vector<int> working;
  if (n_cols <= opt.column_cap) {
    working.resize(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) working[j] = static_cast<int>(j);
  } else {
    // Start from a cover: the lex-first maximal set containing each row.
    std::set<int> init;
    for (int i : g.active_rows)
      for (std::size_t j = 0; j < n_cols; ++j)
        if (g.family.maximal_sets[j].contains(i)) {
          init.insert(static_cast<int>(j));
          break;
        }
    working.assign(init.begin(), init.end());
  }

  lp::CoverResult lp_res;
  for (int round = 0;; ++round) {
    std::vector<std::vector<double>> cols;
    cols.reserve(working.size());
    for (int j : working)
      cols.push_back(detail::game_column(g, g.family.maximal_sets[static_cast<std::size_t>(j)]));
    lp_res = lp::solve_unit_cover(m, cols, opt.iteration_cap);
    if (!lp_res.optimal)
      throw NoCertificateError("simplex iteration cap exceeded",
                               detail::assemble(g, working, lp_res.x, lp_res.y));
    if (working.size() == n_cols) break;

    // Price every column against the unnormalized dual; dual feasibility
    // needs y^T A_j <= 1.
    std::vector<std::pair<double, int>> violated;
    for (std::size_t j = 0; j < n_cols; ++j) {
      double v = 0.0;
      for (std::size_t r = 0; r < g.active_rows.size(); ++r) {
        const int i = g.active_rows[r];
        if (g.family.maximal_sets[j].contains(i))
          v += lp_res.y[r] / g.weights[static_cast<std::size_t>(i)];
      }
      if (v > 1.0 + 1e-12) violated.emplace_back(-v, static_cast<int>(j));
    }
    if (violated.empty()) break;
    if (round > 10000)
      throw NoCertificateError("column generation did not converge",
                               detail::assemble(g, working, lp_res.x, lp_res.y));
    std::sort(violated.begin(), violated.end());
    std::set<int> merged(working.begin(), working.end());
    for (std::size_t k = 0; k < violated.size() && k < 32; ++k)
      merged.insert(violated[k].second);
    working.assign(merged.begin(), merged.end());
  }

  WitnessMeasure w = detail::assemble(g, working, lp_res.x, lp_res.y);
  if (w.gap > opt.gap_tol)
    throw NoCertificateError("duality gap " + format_double(w.gap) +
                                 " exceeds tolerance " + format_double(opt.gap_tol),
                             w);
  return w;
}

// Per-index marginals and their ratios against the theorem's right-hand
// side. ratio_i = marginal_i / (eps^2 w_i) with w_i = |T e_i|^2 for the
// isomorphism bound, or marginal_i / delta^2 for the suppression bound.
// The minimum over non-vacuous rows is the empirical constant.
struct BoundReport {
  std::vector<double> marginals;
  std::vector<double> ratios;  // NaN on vacuous (zero-weight) indices
  std::vector<int> vacuous;    // zero-weight indices, bound is 0 <= anything
  double min_ratio = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline BoundReport bound_report(const std::vector<double>& denominators,
                                const WitnessMeasure& w) {
  if (w.gap > 1e-9 + 1e-15)
    throw Error(ErrorKind::no_certificate,
                "witness measure is not certified: gap " + format_double(w.gap));
  BoundReport r;
  r.marginals = w.marginals;
  r.ratios.assign(w.marginals.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < w.marginals.size(); ++i) {
    if (denominators[i] > 0.0) {
      r.ratios[i] = w.marginals[i] / denominators[i];
      if (std::isnan(r.min_ratio) || r.ratios[i] < r.min_ratio)
        r.min_ratio = r.ratios[i];
    } else {
      r.vacuous.push_back(static_cast<int>(i));
    }
  }
  return r;
}

}  // namespace detail

inline BoundReport theorem2_bound_report(const Matrix& t, double epsilon,
                                         const WitnessMeasure& w) {
  if (static_cast<std::size_t>(t.cols()) != w.marginals.size())
    throw Error(ErrorKind::dimension_mismatch, "operator does not match measure dimension");
  std::vector<double> denom(w.marginals.size());
  for (int i = 0; i < t.cols(); ++i) {
    const double cn = t.column_norm(i);
    denom[static_cast<std::size_t>(i)] = epsilon * epsilon * cn * cn;
  }
  return detail::bound_report(denom, w);
}

inline BoundReport suppression_bound_report(double delta, const WitnessMeasure& w) {
  std::vector<double> denom(w.marginals.size(), delta * delta);
  return detail::bound_report(denom, w);
}

}  // namespace isolab

#endif  // ISOLAB_WITNESS_HPP
