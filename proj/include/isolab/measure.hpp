#ifndef ISOLAB_MEASURE_HPP
#define ISOLAB_MEASURE_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "isolab/error.hpp"
#include "isolab/matrix.hpp"
#include "isolab/subset.hpp"

namespace isolab {

enum class MeasureKind { counting, probability, general };

// Nonnegative weight per basis index; mu_i in the selection bounds, or the
// probability variant lambda_i.
struct IndexMeasure {
  std::vector<double> weights;
  MeasureKind kind = MeasureKind::general;

  static IndexMeasure counting(int n) {
    IndexMeasure m;
    m.weights.assign(static_cast<std::size_t>(n), 1.0);
    m.kind = MeasureKind::counting;
    return m;
  }

  static IndexMeasure probability(std::vector<double> w) {
    IndexMeasure m;
    m.weights = std::move(w);
    m.kind = MeasureKind::probability;
    m.validate(static_cast<int>(m.weights.size()));
    return m;
  }

  static IndexMeasure general(std::vector<double> w) {
    IndexMeasure m;
    m.weights = std::move(w);
    m.kind = MeasureKind::general;
    m.validate(static_cast<int>(m.weights.size()));
    return m;
  }

  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  double mass(const SubsetMask& sigma) const {
    double s = 0.0;
    for (int i : sigma.indices()) s += weights[static_cast<std::size_t>(i)];
    return s;
  }

  void validate(int n) const {
    if (weights.size() != static_cast<std::size_t>(n))
      throw Error(ErrorKind::dimension_mismatch,
                  "measure length " + std::to_string(weights.size()) +
                      " does not match dimension " + std::to_string(n));
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
        throw Error(ErrorKind::invalid_input,
                    "measure weight " + std::to_string(i) +
                        " must be finite and nonnegative");
    if (kind == MeasureKind::counting)
      for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] != 1.0)
          throw Error(ErrorKind::invalid_input, "counting measure must have unit weights");
    if (kind == MeasureKind::probability && std::abs(total() - 1.0) > 1e-12)
      throw Error(ErrorKind::invalid_input,
                  "probability measure sums to " + format_double(total()));
  }
};

// lambda_i = mu_i |T e_i|^2 / sum_j mu_j |T e_j|^2.
inline IndexMeasure mu_to_lambda(const IndexMeasure& mu, const Matrix& t) {
  mu.validate(t.cols());
  std::vector<double> col_sq(static_cast<std::size_t>(t.cols()));
  double denom = 0.0;
  for (int i = 0; i < t.cols(); ++i) {
    const double cn = t.column_norm(i);
    col_sq[static_cast<std::size_t>(i)] = cn * cn;
    denom += mu.weights[static_cast<std::size_t>(i)] * cn * cn;
  }
  if (denom <= 0.0)
    throw Error(ErrorKind::degenerate,
                "sum of mu_i |T e_i|^2 vanishes: cannot normalize");
  std::vector<double> lambda(col_sq.size());
  for (std::size_t i = 0; i < lambda.size(); ++i)
    lambda[i] = mu.weights[i] * col_sq[i] / denom;
  return IndexMeasure::probability(std::move(lambda));
}

// mu_i = lambda_i |T e_i|^{-2}; lambda must put no mass on zero columns.
inline IndexMeasure lambda_to_mu(const IndexMeasure& lambda, const Matrix& t) {
  lambda.validate(t.cols());
  std::vector<double> mu(lambda.weights.size(), 0.0);
  for (int i = 0; i < t.cols(); ++i) {
    const double li = lambda.weights[static_cast<std::size_t>(i)];
    if (li == 0.0) continue;
    const double cn = t.column_norm(i);
    if (cn == 0.0)
      throw Error(ErrorKind::degenerate,
                  "lambda puts mass on zero column " + std::to_string(i));
    mu[static_cast<std::size_t>(i)] = li / (cn * cn);
  }
  return IndexMeasure::general(std::move(mu));
}

}  // namespace isolab

#endif  // ISOLAB_MEASURE_HPP
