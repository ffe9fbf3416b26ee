// Runs the full selection pipeline on a random unit-column operator and
// prints the inequality ledger.

#include <cstdio>

#include "isolab/isolab.hpp"

int main() {
  using namespace isolab;

  const EnsembleSpec spec{EnsembleKind::gaussian_normalized, 8, 0.0, 20240817, 1};
  const Matrix t = generate(spec).front();
  const double epsilon = 0.4;

  const ProofTrace trace = run_pipeline(t, epsilon, IndexMeasure::counting(8), 2.0);

  std::printf("epsilon %.2f  C %.2f  scale %.6f\n", trace.epsilon, trace.c_bound,
              trace.scale);
  std::printf("sigma1 %s  |T2| %.6f  |S| %.6f%s\n", trace.sigma1.to_string().c_str(),
              trace.t2_norm, trace.s_norm,
              trace.short_circuited ? "  (short-circuited)" : "");
  std::printf("final set %s  mu %.1f\n", trace.sigma_final.to_string().c_str(),
              trace.mu_final);
  for (const LedgerEntry& e : trace.checks)
    std::printf("  %-10s lhs %12.6g  rhs %12.6g  %s\n", e.label.c_str(), e.lhs,
                e.rhs, e.pass ? "pass" : "FAIL");
  std::printf("trace %s\n", trace.passed() ? "passed" : "FAILED");

  const IsoFamily family = enumerate_isomorphism_family(t, epsilon);
  std::vector<double> weights(8, 1.0);
  const WitnessMeasure w = solve_game(build_game(family, weights));
  std::printf("witness floor %.6f  gap %.2e  support size %zu\n", w.floor, w.gap,
              w.support.size());
  return trace.passed() ? 0 : 1;
}
