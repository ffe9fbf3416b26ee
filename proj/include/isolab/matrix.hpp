#ifndef ISOLAB_MATRIX_HPP
#define ISOLAB_MATRIX_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "isolab/error.hpp"
#include "isolab/subset.hpp"

namespace isolab {

// Dense row-major real matrix, capped at 64x64. The columns are the images
// of the basis vectors. The 0x0 matrix is allowed so that taking the
// principal submatrix over the empty index set stays total; its operator
// norm is 0 by convention.
class Matrix {
 public:
  Matrix() = default;

  Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    entries_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  }

  Matrix(int rows, int cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    check_dims(rows, cols);
    if (entries_.size() != static_cast<std::size_t>(rows) * cols)
      throw Error(ErrorKind::invalid_input,
                  "entry count " + std::to_string(entries_.size()) +
                      " does not match " + std::to_string(rows) + "x" +
                      std::to_string(cols));
    for (std::size_t k = 0; k < entries_.size(); ++k)
      if (!std::isfinite(entries_[k]))
        throw Error(ErrorKind::invalid_input,
                    "entry (" + std::to_string(k / cols) + "," +
                        std::to_string(k % cols) + ") is not finite");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return Matrix();
    std::vector<double> flat;
    const std::size_t cols = rows.front().size();
    for (const auto& r : rows) {
      if (r.size() != cols)
        throw Error(ErrorKind::invalid_input, "ragged row lengths");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Matrix(static_cast<int>(rows.size()), static_cast<int>(cols),
                  std::move(flat));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }
  bool is_square() const { return rows_ == cols_; }

  double operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double& operator()(int i, int j) {
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const std::vector<double>& entries() const { return entries_; }

  double column_dot(int j, int k) const {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += (*this)(i, j) * (*this)(i, k);
    return s;
  }

  double column_norm(int j) const { return std::sqrt(column_dot(j, j)); }

  bool column_is_zero(int j) const {
    for (int i = 0; i < rows_; ++i)
      if ((*this)(i, j) != 0.0) return false;
    return true;
  }

  bool is_zero() const {
    for (double v : entries_)
      if (v != 0.0) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix scaled(double s) const {
    Matrix out = *this;
    for (double& v : out.entries_) v *= s;
    return out;
  }

  // First entry pair (i,j), i<j, with |a_ij - a_ji| > tol, if any.
  std::optional<std::pair<int, int>> asymmetry(double tol = 1e-12) const {
    if (!is_square()) return std::make_pair(-1, -1);
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol)
          return std::make_pair(i, j);
    return std::nullopt;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  static void check_dims(int rows, int cols) {
    const bool empty_ok = rows == 0 && cols == 0;
    const bool in_range =
        rows >= 1 && cols >= 1 && rows <= kMaxDim && cols <= kMaxDim;
    if (!empty_ok && !in_range)
      throw Error(ErrorKind::invalid_input,
                  "matrix dimensions " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " outside 1..64");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> entries_;
};

// A * B.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::dimension_mismatch, "incompatible product shapes");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// sqrt of the sum of squared entries; equals sqrt(sum_i |A e_i|^2).
inline double hs_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

// Columns of A selected by sigma (ascending), keeping all rows.
inline Matrix column_submatrix(const Matrix& a, const SubsetMask& sigma) {
  if (sigma.n() != a.cols())
    throw Error(ErrorKind::dimension_mismatch,
                "subset over dimension " + std::to_string(sigma.n()) +
                    " does not index " + std::to_string(a.cols()) + " columns");
  const std::vector<int> idx = sigma.indices();
  if (idx.empty()) return Matrix();
  Matrix out(a.rows(), static_cast<int>(idx.size()));
  for (int i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, static_cast<int>(j)) = a(i, idx[j]);
  return out;
}

// A restricted to sigma x sigma, in sigma's ascending order. The empty
// subset yields the 0x0 matrix.
inline Matrix principal_submatrix(const Matrix& a, const SubsetMask& sigma) {
  if (!a.is_square())
    throw Error(ErrorKind::invalid_input, "principal submatrix of a non-square matrix");
  if (sigma.n() != a.rows())
    throw Error(ErrorKind::dimension_mismatch,
                "subset over dimension " + std::to_string(sigma.n()) +
                    " does not index a " + std::to_string(a.rows()) +
                    "-dimensional matrix");
  const std::vector<int> idx = sigma.indices();
  if (idx.empty()) return Matrix();
  Matrix out(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(static_cast<int>(i), static_cast<int>(j)) = a(idx[i], idx[j]);
  return out;
}

// Gram matrix of the normalized columns T e_i / |T e_i| over sigma:
// entry (i,j) = <T e_i, T e_j> / (|T e_i| |T e_j|), unit diagonal.
inline Matrix gram_normalized(const Matrix& t, const SubsetMask& sigma) {
  if (sigma.n() != t.cols())
    throw Error(ErrorKind::dimension_mismatch,
                "subset over dimension " + std::to_string(sigma.n()) +
                    " does not index " + std::to_string(t.cols()) + " columns");
  const std::vector<int> idx = sigma.indices();
  std::vector<double> norms(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    norms[j] = t.column_norm(idx[j]);
    if (norms[j] == 0.0)
      throw Error(ErrorKind::zero_column,
                  "column " + std::to_string(idx[j]) + " is zero");
  }
  if (idx.empty()) return Matrix();
  Matrix g(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    g(static_cast<int>(i), static_cast<int>(i)) = 1.0;
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const double v = t.column_dot(idx[i], idx[j]) / (norms[i] * norms[j]);
      g(static_cast<int>(i), static_cast<int>(j)) = v;
      g(static_cast<int>(j), static_cast<int>(i)) = v;
    }
  }
  return g;
}

// Column indices j with T e_j = 0 exactly.
inline SubsetMask zero_columns(const Matrix& t) {
  SubsetMask z(t.cols());
  for (int j = 0; j < t.cols(); ++j)
    if (t.column_is_zero(j)) z = z.with(j);
  return z;
}

// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Text format: first line "rows cols", then `rows` lines of `cols`
// space-separated decimal numbers. NaN and infinities are rejected.
inline Matrix parse_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::invalid_input, "empty matrix input");
  std::istringstream header(line);
  long rows = 0, cols = 0;
  if (!(header >> rows >> cols))
    throw Error(ErrorKind::invalid_input, "matrix header must be 'rows cols'");
  std::string rest;
  if (header >> rest)
    throw Error(ErrorKind::invalid_input, "trailing tokens after matrix header");
  if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim)
    throw Error(ErrorKind::invalid_input,
                "matrix dimensions " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " outside 1..64");
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw Error(ErrorKind::invalid_input,
                  "expected " + std::to_string(rows) + " matrix rows, got " +
                      std::to_string(i));
    std::istringstream row(line);
    for (long j = 0; j < cols; ++j) {
      std::string tok;
      if (!(row >> tok))
        throw Error(ErrorKind::invalid_input,
                    "row " + std::to_string(i) + " has fewer than " +
                        std::to_string(cols) + " entries");
      double v = 0.0;
      const char* b = tok.data();
      auto res = std::from_chars(b, b + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != b + tok.size())
        throw Error(ErrorKind::invalid_input,
                    "bad number '" + tok + "' at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      if (!std::isfinite(v))
        throw Error(ErrorKind::invalid_input,
                    "non-finite entry at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      entries.push_back(v);
    }
    std::string extra;
    if (row >> extra)
      throw Error(ErrorKind::invalid_input,
                  "row " + std::to_string(i) + " has more than " +
                      std::to_string(cols) + " entries");
  }
  return Matrix(static_cast<int>(rows), static_cast<int>(cols), std::move(entries));
}

inline std::string format_matrix(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace isolab

#endif  // ISOLAB_MATRIX_HPP
