#ifndef ISOLAB_ERROR_HPP
#define ISOLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace isolab {

enum class ErrorKind {
  invalid_input,       // malformed matrices, bad indices, unreadable files
  invalid_parameter,   // epsilon/delta/C outside their documented ranges
  zero_column,         // a zero column where a nonzero one is required
  diagonal_violation,  // nonzero diagonal where a zero diagonal is required
  dimension_mismatch,  // incompatible ambient dimensions
  degenerate,          // zero operator, all-zero weights, empty game
  size_cap,            // enumeration dimension cap exceeded
  no_certificate,      // solver could not certify within tolerance
  numeric_failure,     // eigensolver non-convergence and similar
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit codes used by the command-line tool.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::size_cap:
      return 3;
    case ErrorKind::no_certificate:
    case ErrorKind::numeric_failure:
      return 4;
    default:
      return 2;
  }
}

}  // namespace isolab

#endif  // ISOLAB_ERROR_HPP
