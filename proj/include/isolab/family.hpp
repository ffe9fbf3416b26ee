#ifndef ISOLAB_FAMILY_HPP
#define ISOLAB_FAMILY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "isolab/eig.hpp"
#include "isolab/error.hpp"
#include "isolab/matrix.hpp"
#include "isolab/subset.hpp"

namespace isolab {

// Spectral bounds are inclusive within this tolerance so that membership of
// exactly-critical instances does not flap.
inline constexpr double kBoundaryTol = 1e-9;

// Exhaustive enumeration walks the subset lattice; 2^n is capped here.
inline constexpr int kEnumerationCap = 24;

enum class FamilyKind { isomorphism, suppression };

// A downward-closed family of subsets of {0..n-1}, stored as the antichain
// of its maximal sets (lexicographically sorted). For the isomorphism kind,
// indices whose column is zero belong to every member set; they are kept in
// free_indices and implicitly extend every maximal set.
struct IsoFamily {
  int n = 0;
  FamilyKind kind = FamilyKind::isomorphism;
  double param = 0.0;  // epsilon or delta
  std::vector<SubsetMask> maximal_sets;
  SubsetMask free_indices;

  bool operator==(const IsoFamily& o) const {
    return n == o.n && kind == o.kind && param == o.param &&
           maximal_sets == o.maximal_sets && free_indices == o.free_indices;
  }
};

// True iff every eigenvalue of the normalized Gram matrix over sigma (zero
// columns stripped) lies in [1-eps-tol, 1+eps+tol]. The empty set and
// singletons are members of every family.
inline bool check_isomorphism(const Matrix& t, double epsilon,
                              const SubsetMask& sigma,
                              double tol = kBoundaryTol) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "epsilon must lie in (0,1), got " + format_double(epsilon));
  if (tol < 0.0)
    throw Error(ErrorKind::invalid_parameter, "tolerance must be nonnegative");
  if (sigma.n() != t.cols())
    throw Error(ErrorKind::dimension_mismatch,
                "subset dimension " + std::to_string(sigma.n()) +
                    " does not match " + std::to_string(t.cols()) + " columns");
  const SubsetMask active = sigma.set_minus(zero_columns(t));
  if (active.size() <= 1) return true;
  const Spectrum sp = sym_eigs(gram_normalized(t, active));
  return sp.min() >= 1.0 - epsilon - tol && sp.max() <= 1.0 + epsilon + tol;
}

namespace detail {

inline void require_zero_diagonal(const Matrix& s) {
  if (!s.is_square())
    throw Error(ErrorKind::invalid_input, "suppression operator must be square");
  if (auto bad = s.asymmetry(1e-12))
    throw Error(ErrorKind::invalid_input,
                "suppression operator is not symmetric at (" +
                    std::to_string(bad->first) + "," +
                    std::to_string(bad->second) + ")");
  for (int i = 0; i < s.rows(); ++i)
    if (std::abs(s(i, i)) > 1e-12)
      throw Error(ErrorKind::diagonal_violation,
                  "diagonal entry " + std::to_string(i) + " is " +
                      format_double(s(i, i)) + ", expected zero");
}

}  // namespace detail

// True iff |Q_sigma S Q_sigma| <= delta |S| + tol for a zero-diagonal
// symmetric S. A zero operator makes every subset a member.
inline bool check_suppression(const Matrix& s, double delta,
                              const SubsetMask& sigma,
                              double tol = kBoundaryTol) {
  detail::require_zero_diagonal(s);
  if (!(delta > 0.0))
    throw Error(ErrorKind::invalid_parameter,
                "delta must be positive, got " + format_double(delta));
  if (tol < 0.0)
    throw Error(ErrorKind::invalid_parameter, "tolerance must be nonnegative");
  if (sigma.n() != s.rows())
    throw Error(ErrorKind::dimension_mismatch,
                "subset dimension " + std::to_string(sigma.n()) +
                    " does not match a " + std::to_string(s.rows()) +
                    "-dimensional operator");
  const double norm_s = operator_norm(s);
  if (norm_s == 0.0) return true;
  if (sigma.size() <= 1) return true;  // zero diagonal: submatrix norm 0
  return operator_norm(principal_submatrix(s, sigma)) <= delta * norm_s + tol;
}

// Exact antichain of maximal members of a downward-closed membership
// predicate over the non-free indices of {0..n-1}. DFS adds indices in
// increasing order and prunes every superset of a failed set; a set is
// maximal iff no one-element extension is a member.
inline IsoFamily enumerate_family(
    const std::function<bool(const SubsetMask&)>& member, int n,
    FamilyKind kind = FamilyKind::isomorphism, double param = 0.0,
    SubsetMask free_indices = SubsetMask()) {
  if (n < 0 || n > kEnumerationCap)
    throw Error(ErrorKind::size_cap,
                "enumeration dimension " + std::to_string(n) + " exceeds cap " +
                    std::to_string(kEnumerationCap));
  if (free_indices.n() == 0) free_indices = SubsetMask(n);
  if (free_indices.n() != n)
    throw Error(ErrorKind::dimension_mismatch, "free-index mask dimension mismatch");

  std::vector<int> candidates;
  for (int i = 0; i < n; ++i)
    if (!free_indices.contains(i)) candidates.push_back(i);

  std::vector<SubsetMask> maximal;
  auto dfs = [&](auto&& self, const SubsetMask& sigma, std::size_t start) -> void {
    bool extended_above = false;
    for (std::size_t pos = start; pos < candidates.size(); ++pos) {
      const SubsetMask next = sigma.with(candidates[pos]);
      if (member(next)) {
        extended_above = true;
        self(self, next, pos + 1);
      }
    }
    if (extended_above) return;
    for (std::size_t pos = 0; pos < start; ++pos) {
      const int i = candidates[pos];
      if (!sigma.contains(i) && member(sigma.with(i))) return;  // not maximal
    }
    maximal.push_back(sigma);
  };
  dfs(dfs, SubsetMask(n), 0);
  std::sort(maximal.begin(), maximal.end(), lex_less);

  // Spot-check downward closure: every one-element-removed subset of a
  // maximal set must be a member.
  const std::size_t probe = std::min<std::size_t>(maximal.size(), 16);
  for (std::size_t k = 0; k < probe; ++k)
    for (int i : maximal[k].indices())
      if (maximal[k].size() > 1 && !member(maximal[k].without(i)))
        throw Error(ErrorKind::invalid_input,
                    "membership predicate is not downward closed at " +
                        maximal[k].to_string() + " minus " + std::to_string(i));

  IsoFamily f;
  f.n = n;
  f.kind = kind;
  f.param = param;
  f.maximal_sets = std::move(maximal);
  f.free_indices = free_indices;
  return f;
}

// Family of all sets sigma whose normalized Gram spectrum over sigma stays
// within 1 +/- epsilon. Zero columns become free indices.
inline IsoFamily enumerate_isomorphism_family(const Matrix& t, double epsilon,
                                              double tol = kBoundaryTol) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "epsilon must lie in (0,1), got " + format_double(epsilon));
  const int n = t.cols();
  if (n > kEnumerationCap)
    throw Error(ErrorKind::size_cap,
                "enumeration dimension " + std::to_string(n) + " exceeds cap " +
                    std::to_string(kEnumerationCap));
  const SubsetMask free = zero_columns(t);
  const SubsetMask nonzero = SubsetMask::full(n).set_minus(free);
  const std::vector<int> nz = nonzero.indices();
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (std::size_t p = 0; p < nz.size(); ++p) position[static_cast<std::size_t>(nz[p])] = static_cast<int>(p);

  // One full normalized Gram, entrywise identical to gram_normalized on any
  // subset, so the cached checker agrees bit-for-bit with check_isomorphism.
  Matrix gram;
  if (!nz.empty()) gram = gram_normalized(t, nonzero);

  auto member = [&, position](const SubsetMask& sigma) -> bool {
    if (sigma.size() <= 1) return true;
    SubsetMask pos_mask(static_cast<int>(nz.size()));
    for (int i : sigma.indices()) pos_mask = pos_mask.with(position[static_cast<std::size_t>(i)]);
    const Spectrum sp = sym_eigs(principal_submatrix(gram, pos_mask));
    return sp.min() >= 1.0 - epsilon - tol && sp.max() <= 1.0 + epsilon + tol;
  };
  return enumerate_family(member, n, FamilyKind::isomorphism, epsilon, free);
}

// Family of all sets sigma with |Q_sigma S Q_sigma| <= delta |S| + tol.
inline IsoFamily enumerate_suppression_family(const Matrix& s, double delta,
                                              double tol = kBoundaryTol) {
  detail::require_zero_diagonal(s);
  if (!(delta > 0.0))
    throw Error(ErrorKind::invalid_parameter,
                "delta must be positive, got " + format_double(delta));
  const int n = s.rows();
  if (n > kEnumerationCap)
    throw Error(ErrorKind::size_cap,
                "enumeration dimension " + std::to_string(n) + " exceeds cap " +
                    std::to_string(kEnumerationCap));
  const double norm_s = operator_norm(s);
  auto member = [&, norm_s](const SubsetMask& sigma) -> bool {
    if (norm_s == 0.0 || sigma.size() <= 1) return true;
    return operator_norm(principal_submatrix(s, sigma)) <= delta * norm_s + tol;
  };
  return enumerate_family(member, n, FamilyKind::suppression, delta);
}

// True iff sigma minus the free indices is contained in some maximal set.
inline bool membership_query(const IsoFamily& f, const SubsetMask& sigma) {
  if (sigma.n() != f.n)
    throw Error(ErrorKind::dimension_mismatch,
                "subset dimension " + std::to_string(sigma.n()) +
                    " does not match family dimension " + std::to_string(f.n));
  const SubsetMask rest = sigma.set_minus(f.free_indices);
  if (rest.empty()) return true;
  for (const SubsetMask& m : f.maximal_sets)
    if (rest.is_subset_of(m)) return true;
  return false;
}

// Number of member sets, counting the free-index extensions.
inline long long member_count(const IsoFamily& f) {
  long long count = 0;
  const std::uint64_t limit = std::uint64_t{1} << f.n;
  for (std::uint64_t b = 0; b < limit; ++b)
    if (membership_query(f, SubsetMask(f.n, b))) ++count;
  return count;
}

}  // namespace isolab

#endif  // ISOLAB_FAMILY_HPP
