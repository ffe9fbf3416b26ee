#ifndef ISOLAB_EIG_HPP
#define ISOLAB_EIG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "isolab/error.hpp"
#include "isolab/matrix.hpp"

namespace isolab {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  double residual = 0.0;            // off-diagonal Frobenius norm at termination
  Matrix vectors;                   // column k pairs with eigenvalues[k]

  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  double max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  double trace_sum() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  }
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

// Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi
// rotations. Convergence: off-diagonal Frobenius norm <= 1e-12 * (1 + |A|_HS),
// capped at 100 sweeps.
inline Spectrum sym_eigs(const Matrix& a) {
  if (!a.is_square())
    throw Error(ErrorKind::invalid_input,
                "eigensolver needs a square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (auto bad = a.asymmetry(1e-12))
    throw Error(ErrorKind::invalid_input,
                "matrix is not symmetric at entries (" +
                    std::to_string(bad->first) + "," + std::to_string(bad->second) +
                    ") and (" + std::to_string(bad->second) + "," +
                    std::to_string(bad->first) + ")");
  const int n = a.rows();
  if (n == 0) return Spectrum{};

  Matrix m = a;
  Matrix v = Matrix::identity(n);
  const double threshold = 1e-12 * (1.0 + hs_norm(a));

  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    if (detail::off_diagonal_norm(m) <= threshold) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        m(p, p) -= t * apq;
        m(q, q) += t * apq;
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = m(r, p);
            const double arq = m(r, q);
            m(r, p) = arp - s * (arq + tau * arp);
            m(p, r) = m(r, p);
            m(r, q) = arq + s * (arp - tau * arq);
            m(q, r) = m(r, q);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  Spectrum sp;
  sp.residual = detail::off_diagonal_norm(m);
  if (sp.residual > threshold)
    throw Error(ErrorKind::numeric_failure,
                "Jacobi eigensolver did not converge in " +
                    std::to_string(sweep) + " sweeps");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return m(i, i) < m(j, j); });
  sp.eigenvalues.resize(static_cast<std::size_t>(n));
  sp.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    sp.eigenvalues[static_cast<std::size_t>(k)] = m(order[k], order[k]);
    for (int r = 0; r < n; ++r) sp.vectors(r, k) = v(r, order[k]);
  }
  return sp;
}

// Operator (spectral) norm: sqrt of the largest eigenvalue of A^T A,
// computed on the smaller of A^T A and A A^T. Empty matrix -> 0.
inline double operator_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  const bool use_rows = a.rows() <= a.cols();
  const int k = use_rows ? a.rows() : a.cols();
  Matrix b(k, k);
  if (use_rows) {
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        double s = 0.0;
        for (int p = 0; p < a.cols(); ++p) s += a(i, p) * a(j, p);
        b(i, j) = s;
        b(j, i) = s;
      }
  } else {
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const double s = a.column_dot(i, j);
        b(i, j) = s;
        b(j, i) = s;
      }
  }
  const Spectrum sp = sym_eigs(b);
  return std::sqrt(std::max(sp.max(), 0.0));
}

}  // namespace isolab

#endif  // ISOLAB_EIG_HPP
