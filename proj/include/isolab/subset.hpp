#ifndef ISOLAB_SUBSET_HPP
#define ISOLAB_SUBSET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "isolab/error.hpp"

namespace isolab {

inline constexpr int kMaxDim = 64;

// Subset of the basis indices {0, ..., n-1}, n <= 64, as a bit mask.
class SubsetMask {
 public:
  SubsetMask() = default;

  explicit SubsetMask(int n, std::uint64_t bits = 0) : n_(n), bits_(bits) {
    if (n < 0 || n > kMaxDim)
      throw Error(ErrorKind::invalid_input,
                  "subset dimension " + std::to_string(n) + " outside [0, 64]");
    if (n < kMaxDim && (bits >> n) != 0)
      throw Error(ErrorKind::invalid_input,
                  "subset bits exceed ambient dimension " + std::to_string(n));
  }

  static SubsetMask full(int n) {
    return SubsetMask(n, n == kMaxDim ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << n) - 1);
  }

  static SubsetMask of(int n, std::initializer_list<int> indices) {
    SubsetMask m(n);
    for (int i : indices) m = m.with(i);
    return m;
  }

  static SubsetMask from_indices(int n, const std::vector<int>& indices) {
    SubsetMask m(n);
    for (int i : indices) m = m.with(i);
    return m;
  }

  int n() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }

  bool contains(int i) const {
    check_index(i);
    return (bits_ >> i) & 1u;
  }

  SubsetMask with(int i) const {
    check_index(i);
    return SubsetMask(n_, bits_ | (std::uint64_t{1} << i));
  }

  SubsetMask without(int i) const {
    check_index(i);
    return SubsetMask(n_, bits_ & ~(std::uint64_t{1} << i));
  }

  bool is_subset_of(const SubsetMask& o) const { return (bits_ & ~o.bits_) == 0; }
  bool intersects(const SubsetMask& o) const { return (bits_ & o.bits_) != 0; }

  SubsetMask set_union(const SubsetMask& o) const { return SubsetMask(n_, bits_ | o.bits_); }
  SubsetMask set_intersect(const SubsetMask& o) const { return SubsetMask(n_, bits_ & o.bits_); }
  SubsetMask set_minus(const SubsetMask& o) const { return SubsetMask(n_, bits_ & ~o.bits_); }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
      out.push_back(std::countr_zero(b));
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

  bool operator==(const SubsetMask& o) const { return n_ == o.n_ && bits_ == o.bits_; }
  bool operator!=(const SubsetMask& o) const { return !(*this == o); }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= n_)
      throw Error(ErrorKind::invalid_input,
                  "index " + std::to_string(i) + " outside ambient dimension " +
                      std::to_string(n_));
  }

  int n_ = 0;
  std::uint64_t bits_ = 0;
};

// Lexicographic order on the ascending index sequences, e.g.
// {0,1,3} < {0,2,3} and {0} < {0,1} < {1}.
inline bool lex_less(const SubsetMask& a, const SubsetMask& b) {
  std::uint64_t d = a.bits() ^ b.bits();
  if (d == 0) return false;
  int i = std::countr_zero(d);
  if ((a.bits() >> i) & 1u) return (b.bits() >> i) != 0;
  return (a.bits() >> i) == 0;
}

}  // namespace isolab

#endif  // ISOLAB_SUBSET_HPP
