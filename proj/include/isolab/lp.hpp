#ifndef ISOLAB_LP_HPP
#define ISOLAB_LP_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "isolab/error.hpp"

namespace isolab::lp {

// Result of the covering LP  min sum(x)  s.t.  A x >= 1, x >= 0  with a
// nonnegative m x N matrix A. y is the dual vector: y >= 0, y^T A <= 1
// componentwise, and sum(y) = sum(x) at the optimum.
struct CoverResult {
  std::vector<double> x;
  std::vector<double> y;
  double objective = 0.0;
  long pivots = 0;
  bool optimal = false;
};

namespace detail {

constexpr double kPivotTol = 1e-11;

// Full-tableau simplex. Columns: x (N), then surplus s (m); the initial
// basis is implicit artificials (ids >= N + m) that never re-enter.
class CoverSimplex {
 public:
  CoverSimplex(int m, const std::vector<std::vector<double>>& cols)
      : m_(m), n_(static_cast<int>(cols.size())), width_(n_ + m + 1) {
    tab_.assign(static_cast<std::size_t>(m_), std::vector<double>(width_, 0.0));
    basis_.resize(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) tab_[r][j] = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
      tab_[r][n_ + r] = -1.0;  // surplus
      tab_[r][width_ - 1] = 1.0;
      basis_[r] = artificial_id(r);
    }
  }

  CoverResult solve(long iteration_cap) {
    CoverResult res;
    // Phase 1: minimize the sum of artificials. With artificial basis the
    // reduced cost of column j is -sum_r tab[r][j].
    obj_.assign(static_cast<std::size_t>(width_), 0.0);
    for (int j = 0; j < width_; ++j) {
      double s = 0.0;
      for (int r = 0; r < m_; ++r) s += tab_[r][j];
      obj_[j] = -s;
    }
    if (!iterate(iteration_cap, res.pivots)) return extract(res, false);
    if (-obj_[width_ - 1] > 1e-7)
      throw Error(ErrorKind::no_certificate, "covering LP is infeasible");
    drive_out_artificials();

    // Phase 2: minimize sum of x.
    obj_.assign(static_cast<std::size_t>(width_), 0.0);
    for (int j = 0; j < n_; ++j) obj_[j] = 1.0;
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[r];
      if (b < n_) {  // basic x column: eliminate its cost
        const double c = obj_[b];
        if (c != 0.0)
          for (int j = 0; j < width_; ++j) obj_[j] -= c * tab_[r][j];
      }
    }
    const bool done = iterate(iteration_cap, res.pivots);
    return extract(res, done);
  }

 private:
  int artificial_id(int r) const { return n_ + m_ + r; }

  // Bland's rule: entering = lowest-index column with negative reduced cost;
  // leaving = min ratio, ties by lowest basis id. Returns false on cap.
  bool iterate(long cap, long& pivots) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < width_ - 1; ++j)
        if (obj_[j] < -kPivotTol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double coef = tab_[r][enter];
        if (coef <= kPivotTol) continue;
        const double ratio = tab_[r][width_ - 1] / coef;
        const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
        if (leave < 0 || ratio < best_ratio - tie) {
          best_ratio = ratio;
          leave = r;
        } else if (ratio <= best_ratio + tie && basis_[r] < basis_[leave]) {
          best_ratio = std::min(best_ratio, ratio);
          leave = r;
        }
      }
      if (leave < 0)
        throw Error(ErrorKind::no_certificate, "covering LP is unbounded");
      pivot(leave, enter);
      if (++pivots > cap) return false;
    }
  }

  void pivot(int row, int col) {
    const double p = tab_[row][col];
    for (int j = 0; j < width_; ++j) tab_[row][j] /= p;
    tab_[row][col] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = tab_[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) tab_[r][j] -= f * tab_[row][j];
      tab_[r][col] = 0.0;
    }
    const double f = obj_[col];
    if (f != 0.0) {
      for (int j = 0; j < width_; ++j) obj_[j] -= f * tab_[row][j];
      obj_[col] = 0.0;
    }
    basis_[row] = col;
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_ + m_) continue;
      for (int j = 0; j < width_ - 1; ++j)
        if (std::abs(tab_[r][j]) > 1e-9) {
          pivot(r, j);
          break;
        }
      // An all-zero row is a redundant constraint; it stays inert.
    }
  }

  CoverResult extract(CoverResult res, bool optimal) {
    res.optimal = optimal;
    res.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_)
        res.x[static_cast<std::size_t>(basis_[r])] = std::max(tab_[r][width_ - 1], 0.0);
    res.y.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) res.y[static_cast<std::size_t>(i)] = std::max(obj_[n_ + i], 0.0);
    res.objective = 0.0;
    for (double v : res.x) res.objective += v;
    return res;
  }

  int m_, n_, width_;
  std::vector<std::vector<double>> tab_;
  std::vector<double> obj_;
  std::vector<int> basis_;
};

}  // namespace detail

// cols[j][i] is row i of column j; all entries nonnegative.
inline CoverResult solve_unit_cover(int m, const std::vector<std::vector<double>>& cols,
                                    long iteration_cap = 2'000'000) {
  if (m <= 0 || cols.empty())
    throw Error(ErrorKind::degenerate, "covering LP needs rows and columns");
  for (const auto& c : cols)
    if (c.size() != static_cast<std::size_t>(m))
      throw Error(ErrorKind::dimension_mismatch, "covering LP column length mismatch");
  detail::CoverSimplex simplex(m, cols);
  return simplex.solve(iteration_cap);
}

}  // namespace isolab::lp

#endif  // ISOLAB_LP_HPP
