// Independent oracles used by the unit and acceptance suites. Everything
// here recomputes its answer from first principles (characteristic
// polynomials, direct vector arithmetic, exhaustive scans) so that it never
// shares a code path with the implementation it checks.
#ifndef ISOLAB_TESTS_ORACLES_HPP
#define ISOLAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "isolab/family.hpp"
#include "isolab/lp.hpp"
#include "isolab/matrix.hpp"
#include "isolab/subset.hpp"
#include "isolab/testbed.hpp"

namespace oracles {

// Eigenvalues of a symmetric 3x3 matrix as the roots of its characteristic
// cubic, via the trigonometric solution. Ascending order.
inline std::array<double, 3> cubic_eigenvalues(const isolab::Matrix& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> d{a(0, 0), a(1, 1), a(2, 2)};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  // B = (A - qI) / p; r = det(B) / 2.
  auto b = [&](int i, int j) { return (a(i, j) - (i == j ? q : 0.0)) / p; };
  double r = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
             b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
             b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  r /= 2.0;
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  return {lo, 3.0 * q - hi - lo, hi};
}

// Extremes of the Rayleigh quotient |sum a_i T e_i|^2 / sum a_i^2 |T e_i|^2
// over the given coefficient vectors, by direct column arithmetic.
struct QuotientExtremes {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
};

inline double rayleigh_quotient(const isolab::Matrix& t, const std::vector<int>& idx,
                                const std::vector<double>& coeff) {
  std::vector<double> image(static_cast<std::size_t>(t.rows()), 0.0);
  double denom = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const int j = idx[k];
    double col_sq = 0.0;
    for (int i = 0; i < t.rows(); ++i) {
      image[static_cast<std::size_t>(i)] += coeff[k] * t(i, j);
      col_sq += t(i, j) * t(i, j);
    }
    denom += coeff[k] * coeff[k] * col_sq;
  }
  double num = 0.0;
  for (double v : image) num += v * v;
  return num / denom;
}

inline QuotientExtremes sample_quotients(const isolab::Matrix& t,
                                         const isolab::SubsetMask& sigma,
                                         int samples, isolab::SplitMix64& rng,
                                         const std::vector<std::vector<double>>& extra) {
  const std::vector<int> idx = sigma.indices();
  QuotientExtremes ex;
  std::vector<double> coeff(idx.size());
  for (int s = 0; s < samples; ++s) {
    for (double& c : coeff) c = rng.gaussian();
    double norm = 0.0;
    for (double c : coeff) norm += c * c;
    if (norm == 0.0) continue;
    const double q = rayleigh_quotient(t, idx, coeff);
    ex.lo = std::min(ex.lo, q);
    ex.hi = std::max(ex.hi, q);
  }
  for (const auto& c : extra) {
    const double q = rayleigh_quotient(t, idx, c);
    ex.lo = std::min(ex.lo, q);
    ex.hi = std::max(ex.hi, q);
  }
  return ex;
}

// All member sets of a predicate over {0..n-1}, by scanning 2^n subsets.
inline std::vector<isolab::SubsetMask> brute_force_members(
    const std::function<bool(const isolab::SubsetMask&)>& member, int n) {
  std::vector<isolab::SubsetMask> out;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < limit; ++b) {
    const isolab::SubsetMask sigma(n, b);
    if (member(sigma)) out.push_back(sigma);
  }
  return out;
}

// Marginal-game value computed over the FULL member list (not just the
// maximal antichain), as the brute-force check of maximal-set sufficiency.
inline double full_family_game_value(const std::vector<isolab::SubsetMask>& members,
                                     const std::vector<double>& weights) {
  std::vector<int> active;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) active.push_back(static_cast<int>(i));
  std::vector<std::vector<double>> cols;
  for (const isolab::SubsetMask& set : members) {
    std::vector<double> col(active.size(), 0.0);
    for (std::size_t r = 0; r < active.size(); ++r)
      if (set.contains(active[r]))
        col[r] = 1.0 / weights[static_cast<std::size_t>(active[r])];
    cols.push_back(std::move(col));
  }
  const auto res = isolab::lp::solve_unit_cover(static_cast<int>(active.size()), cols);
  return 1.0 / res.objective;
}

// Random dense operator with entries in [-1, 1], optionally rescaled below
// operator norm one.
inline isolab::Matrix random_operator(int rows, int cols, isolab::SplitMix64& rng) {
  isolab::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = 2.0 * rng.uniform() - 1.0;
  return m;
}

inline isolab::Matrix random_symmetric(int n, isolab::SplitMix64& rng) {
  isolab::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = 2.0 * rng.uniform() - 1.0;
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

}  // namespace oracles

#endif  // ISOLAB_TESTS_ORACLES_HPP
