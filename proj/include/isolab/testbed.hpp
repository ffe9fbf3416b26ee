#ifndef ISOLAB_TESTBED_HPP
#define ISOLAB_TESTBED_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "isolab/error.hpp"
#include "isolab/family.hpp"
#include "isolab/matrix.hpp"
#include "isolab/measure.hpp"
#include "isolab/prooftrace.hpp"
#include "isolab/select.hpp"
#include "isolab/subset.hpp"
#include "isolab/witness.hpp"

namespace isolab {

// SplitMix64: the fixed, portable 64-bit generator behind every random
// fixture. Gaussian variates come from a Box-Muller transform of its
// uniforms, so a (spec, seed) pair pins the stream exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 rng(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return rng.next();
}

enum class EnsembleKind {
  identity,
  doubling,
  pair_correlation,
  uniform_correlation,
  gaussian_normalized,
  rank_deficient,
};

inline const char* ensemble_name(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::identity: return "identity";
    case EnsembleKind::doubling: return "doubling";
    case EnsembleKind::pair_correlation: return "pair_correlation";
    case EnsembleKind::uniform_correlation: return "uniform_correlation";
    case EnsembleKind::gaussian_normalized: return "gaussian_normalized";
    case EnsembleKind::rank_deficient: return "rank_deficient";
  }
  return "unknown";
}

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::identity;
  int n = 0;
  double param = 0.0;  // rho for the correlation kinds, rank for rank_deficient
  std::uint64_t seed = 0;
  int count = 1;

  void validate() const {
    if (n < 1 || n > kMaxDim)
      throw Error(ErrorKind::invalid_input,
                  "ensemble dimension " + std::to_string(n) + " outside 1..64");
    if (count < 1)
      throw Error(ErrorKind::invalid_input, "sample count must be positive");
    switch (kind) {
      case EnsembleKind::pair_correlation:
        if (!(std::abs(param) < 1.0))
          throw Error(ErrorKind::invalid_input,
                      "pair correlation needs |rho| < 1, got " + format_double(param));
        break;
      case EnsembleKind::uniform_correlation:
        if (!(std::abs(param) < 1.0) || 1.0 + (n - 1) * param < 0.0)
          throw Error(ErrorKind::invalid_input,
                      "uniform correlation needs |rho| < 1 and rho >= -1/(n-1)");
        break;
      case EnsembleKind::rank_deficient: {
        const int r = static_cast<int>(param);
        if (r < 1 || r >= n)
          throw Error(ErrorKind::invalid_input,
                      "rank must lie in 1..n-1, got " + format_double(param));
        break;
      }
      default:
        break;
    }
  }
};

namespace detail {

inline Matrix doubling_matrix(int n) {
  // Column j is e_{ceil(j/2)} (zero-based); columns 2i-1 and 2i coincide.
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) m((j + 1) / 2, j) = 1.0;
  return m;
}

inline Matrix pair_correlation_matrix(int n, double rho) {
  Matrix m(n, n);
  const double ortho = std::sqrt(1.0 - rho * rho);
  for (int j = 0; j + 1 < n; j += 2) {
    m(j, j) = 1.0;
    m(j, j + 1) = rho;
    m(j + 1, j + 1) = ortho;
  }
  if (n % 2 == 1) m(n - 1, n - 1) = 1.0;
  return m;
}

inline Matrix uniform_correlation_matrix(int n, double rho) {
  // Symmetric square root of (1-rho) I + rho J; its columns reproduce that
  // Gram matrix exactly up to rounding.
  const double a = std::sqrt(1.0 - rho);
  const double b = (std::sqrt(1.0 + (n - 1) * rho) - a) / n;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = (i == j ? a : 0.0) + b;
  return m;
}

inline Matrix gaussian_normalized_matrix(int n, SplitMix64& rng) {
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      m(i, j) = rng.gaussian();
      norm_sq += m(i, j) * m(i, j);
    }
    const double norm = std::sqrt(norm_sq);
    for (int i = 0; i < n; ++i) m(i, j) /= norm;
  }
  return m;
}

inline Matrix rank_deficient_matrix(int n, int rank, SplitMix64& rng) {
  Matrix left(n, rank);
  Matrix right(rank, n);
  for (auto* block : {&left, &right})
    for (int i = 0; i < block->rows(); ++i)
      for (int j = 0; j < block->cols(); ++j) (*block)(i, j) = rng.gaussian();
  Matrix m = multiply(left, right);
  return m.scaled(1.0 / std::sqrt(static_cast<double>(rank)));
}

}  // namespace detail

// Deterministic sample sequence: sample s uses derive_seed(spec.seed, s), so
// the same spec and seed reproduce the same matrices bit for bit.
inline std::vector<Matrix> generate(const EnsembleSpec& spec) {
  spec.validate();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int s = 0; s < spec.count; ++s) {
    SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(s)));
    switch (spec.kind) {
      case EnsembleKind::identity:
        out.push_back(Matrix::identity(spec.n));
        break;
      case EnsembleKind::doubling:
        out.push_back(detail::doubling_matrix(spec.n));
        break;
      case EnsembleKind::pair_correlation:
        out.push_back(detail::pair_correlation_matrix(spec.n, spec.param));
        break;
      case EnsembleKind::uniform_correlation:
        out.push_back(detail::uniform_correlation_matrix(spec.n, spec.param));
        break;
      case EnsembleKind::gaussian_normalized:
        out.push_back(detail::gaussian_normalized_matrix(spec.n, rng));
        break;
      case EnsembleKind::rank_deficient:
        out.push_back(detail::rank_deficient_matrix(spec.n, static_cast<int>(spec.param), rng));
        break;
    }
  }
  return out;
}

// Colliding column pairs {2i-1, 2i} of the doubling operator in dimension n.
inline int doubling_pair_count(int n) { return (n - 1) / 2; }

struct RateResult {
  int n = 0;
  int pairs = 0;
  double exact = 1.0;      // (3/4)^pairs, or 1 when the pair test passes
  double estimate = 1.0;   // Monte-Carlo frequency
  long trials = 0;
  long hits = 0;
  std::uint64_t seed = 0;
};

// Probability that a uniformly random subset is a member of the doubling
// operator's family. A subset is a member iff it avoids every colliding
// pair (or the pair itself is a member, in which case everything is).
inline RateResult random_subset_rate(const EnsembleSpec& spec, double epsilon,
                                     long trials, std::uint64_t seed) {
  if (spec.kind != EnsembleKind::doubling)
    throw Error(ErrorKind::invalid_input, "subset rate is defined for the doubling ensemble");
  spec.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::invalid_parameter,
                "epsilon must lie in (0,1), got " + format_double(epsilon));
  if (trials < 1)
    throw Error(ErrorKind::invalid_parameter, "trials must be positive");

  const int n = spec.n;
  const int pairs = doubling_pair_count(n);
  RateResult res;
  res.n = n;
  res.pairs = pairs;
  res.trials = trials;
  res.seed = seed;

  bool pair_member = false;
  if (pairs > 0) {
    const Matrix t = detail::doubling_matrix(n);
    pair_member = check_isomorphism(t, epsilon, SubsetMask::of(n, {1, 2}));
  }
  res.exact = pair_member ? 1.0 : std::pow(0.75, pairs);

  std::vector<std::uint64_t> pair_masks;
  for (int i = 1; i + 1 < n; i += 2)
    pair_masks.push_back((std::uint64_t{3} << i));

  SplitMix64 rng(seed);
  const std::uint64_t mask_all =
      n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  long hits = 0;
  for (long tr = 0; tr < trials; ++tr) {
    const std::uint64_t bits = rng.next() & mask_all;
    bool member = pair_member;
    if (!member) {
      member = true;
      for (std::uint64_t pm : pair_masks)
        if ((bits & pm) == pm) {
          member = false;
          break;
        }
    }
    if (member) ++hits;
  }
  res.hits = hits;
  res.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  return res;
}

struct EstimateRow {
  std::string ensemble;
  int n = 0;
  double epsilon = 0.0;
  double c_bound = 0.0;
  std::uint64_t seed = 0;
  double c_eq2 = std::numeric_limits<double>::quiet_NaN();
  double c_eq4 = std::numeric_limits<double>::quiet_NaN();
  double c_eq6 = std::numeric_limits<double>::quiet_NaN();
  double c_eq9 = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

struct EstimateReport {
  std::vector<EstimateRow> rows;
};

namespace detail {

struct SampleConstants {
  double c_eq2 = std::numeric_limits<double>::quiet_NaN();
  double c_eq6 = std::numeric_limits<double>::quiet_NaN();
  double c_eq9 = std::numeric_limits<double>::quiet_NaN();
};

// Constants that do not depend on the norm-bound parameter C.
inline SampleConstants sample_constants(const Matrix& t, double epsilon) {
  SampleConstants out;

  // Marginal floor of the witness game against eps^2 |T e_i|^2.
  std::vector<double> weights(static_cast<std::size_t>(t.cols()));
  bool any_active = false;
  for (int i = 0; i < t.cols(); ++i) {
    const double cn = t.column_norm(i);
    weights[static_cast<std::size_t>(i)] = cn * cn;
    any_active = any_active || cn > 0.0;
  }
  const IsoFamily family = enumerate_isomorphism_family(t, epsilon);
  if (any_active) {
    const WitnessMeasure w = solve_game(build_game(family, weights));
    out.c_eq2 = theorem2_bound_report(t, epsilon, w).min_ratio;
  }

  // Counting-measure selection on the norm-one operator.
  const Matrix tn = normalize_operator(t).matrix;
  const SelectionResult sel =
      select_exhaustive(tn, epsilon, IndexMeasure::counting(tn.cols()));
  out.c_eq6 = sel.empirical_c;

  // Suppression game on Gram - I over the nonzero (normalized) columns.
  const ColumnNormalized nc = normalize_columns(t);
  const SubsetMask nonzero = SubsetMask::full(t.cols()).set_minus(nc.zero_cols);
  if (nonzero.size() > 1) {
    const Matrix cols = column_submatrix(nc.matrix, nonzero);
    const Matrix s = build_zero_diag(cols);
    const double s_norm = operator_norm(s);
    if (s_norm > 1e-12) {
      const double delta = epsilon / s_norm;
      const IsoFamily supp = enumerate_suppression_family(s, delta);
      std::vector<double> unit(static_cast<std::size_t>(s.rows()), 1.0);
      const WitnessMeasure w = solve_game(build_game(supp, unit));
      out.c_eq9 = suppression_bound_report(delta, w).min_ratio;
    }
  }
  return out;
}

}  // namespace detail

// One row per (spec, sample, epsilon, C): the empirical constants of the
// marginal bound, the pipeline selection, the counting-measure selection,
// and the suppression bound. A failing sample marks its row failed instead
// of aborting the sweep.
inline EstimateReport estimate_constants(const std::vector<EnsembleSpec>& specs,
                                         const std::vector<double>& eps_grid,
                                         const std::vector<double>& c_grid) {
  EstimateReport report;
  for (const EnsembleSpec& spec : specs) {
    spec.validate();
    const std::vector<Matrix> samples = generate(spec);
    for (int s = 0; s < spec.count; ++s) {
      const std::uint64_t sample_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(s));
      for (double eps : eps_grid) {
        detail::SampleConstants base;
        std::string base_status = "ok";
        try {
          base = detail::sample_constants(samples[static_cast<std::size_t>(s)], eps);
        } catch (const Error& e) {
          base_status = std::string("failed: ") + e.what();
        }
        for (double c_bound : c_grid) {
          EstimateRow row;
          row.ensemble = ensemble_name(spec.kind);
          row.n = spec.n;
          row.epsilon = eps;
          row.c_bound = c_bound;
          row.seed = sample_seed;
          row.status = base_status;
          row.c_eq2 = base.c_eq2;
          row.c_eq6 = base.c_eq6;
          row.c_eq9 = base.c_eq9;
          if (base_status == "ok") {
            try {
              const ProofTrace trace =
                  run_pipeline(samples[static_cast<std::size_t>(s)], eps,
                               IndexMeasure::counting(spec.n), c_bound);
              if (!trace.passed()) {
                row.status = "failed: pipeline check failed";
              } else {
                for (const LedgerEntry& e : trace.checks)
                  if (e.label == "eq4-ratio") row.c_eq4 = e.lhs;
              }
            } catch (const Error& e) {
              row.status = std::string("failed: ") + e.what();
            }
          }
          report.rows.push_back(row);
        }
      }
    }
  }
  return report;
}

inline std::string estimate_csv(const EstimateReport& report) {
  std::string out = "ensemble,n,epsilon,C,seed,c_eq2,c_eq4,c_eq6,c_eq9,status\n";
  for (const EstimateRow& r : report.rows) {
    out += r.ensemble;
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(r.epsilon);
    out += ',' + format_double(r.c_bound);
    out += ',' + std::to_string(r.seed);
    out += ',' + format_double(r.c_eq2);
    out += ',' + format_double(r.c_eq4);
    out += ',' + format_double(r.c_eq6);
    out += ',' + format_double(r.c_eq9);
    out += ',' + r.status + '\n';
  }
  return out;
}

namespace detail {

inline double median_ignoring_nan(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }),
          v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace detail

// Per-epsilon series of median constants, grouped over the sample seeds.
inline std::string estimate_plot_tsv(const EstimateReport& report) {
  using Key = std::tuple<std::string, int, double, double>;  // ensemble, n, C, eps
  std::map<Key, std::vector<const EstimateRow*>> groups;
  std::vector<Key> order;
  for (const EstimateRow& r : report.rows) {
    const Key key{r.ensemble, r.n, r.c_bound, r.epsilon};
    if (groups.find(key) == groups.end()) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::string out = "ensemble\tn\tC\tepsilon\tmed_c_eq2\tmed_c_eq4\tmed_c_eq6\tmed_c_eq9\n";
  for (const Key& key : order) {
    std::vector<double> e2, e4, e6, e9;
    for (const EstimateRow* r : groups[key]) {
      e2.push_back(r->c_eq2);
      e4.push_back(r->c_eq4);
      e6.push_back(r->c_eq6);
      e9.push_back(r->c_eq9);
    }
    out += std::get<0>(key);
    out += '\t' + std::to_string(std::get<1>(key));
    out += '\t' + format_double(std::get<2>(key));
    out += '\t' + format_double(std::get<3>(key));
    out += '\t' + format_double(detail::median_ignoring_nan(e2));
    out += '\t' + format_double(detail::median_ignoring_nan(e4));
    out += '\t' + format_double(detail::median_ignoring_nan(e6));
    out += '\t' + format_double(detail::median_ignoring_nan(e9));
    out += '\n';
  }
  return out;
}

}  // namespace isolab

#endif  // ISOLAB_TESTBED_HPP
