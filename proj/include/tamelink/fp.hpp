#pragma once

#include <cstdint>
#include <vector>

#include "tamelink/arith.hpp"

namespace tamelink::fp {

using u64 = std::uint64_t;

inline u64 normalize(long long v, u64 p) {
  long long m = static_cast<long long>(p);
  long long r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

inline u64 add(u64 a, u64 b, u64 p) { return (a + b) % p; }
inline u64 sub(u64 a, u64 b, u64 p) { return (a + p - b % p) % p; }
inline u64 mul(u64 a, u64 b, u64 p) { return a * b % p; }
inline u64 neg(u64 a, u64 p) { return (p - a % p) % p; }
inline u64 inv(u64 a, u64 p) { return arith::pow_mod(a % p, p - 2, p); }

/// Row-echelon accumulator over F_p. Rows are dense vectors of a fixed width;
/// insert() reduces against the pivots seen so far and keeps the row iff it is
/// independent of them.
class Eliminator {
 public:
  Eliminator(std::size_t width, u64 p) : width_(width), p_(p), pivot_of_col_(width, npos) {}

  std::size_t rank() const { return rows_.size(); }

  /// Reduces row in place; returns true if it added a new pivot.
  bool insert(std::vector<u64>& row) {
    reduce(row);
    for (std::size_t c = 0; c < width_; ++c) {
      if (row[c] == 0) continue;
      u64 scale = inv(row[c], p_);
      for (auto& v : row) v = mul(v, scale, p_);
      pivot_of_col_[c] = rows_.size();
      pivot_cols_.push_back(c);
      rows_.push_back(row);
      return true;
    }
    return false;
  }

  bool insert_copy(std::vector<u64> row) { return insert(row); }

  const std::vector<std::vector<u64>>& rows() const { return rows_; }

  /// Reduces row against the stored pivots without inserting it.
  void reduce(std::vector<u64>& row) const {
    for (std::size_t c = 0; c < width_; ++c) {
      if (row[c] == 0 || pivot_of_col_[c] == npos) continue;
      u64 factor = row[c];
      const auto& pivot = rows_[pivot_of_col_[c]];
      for (std::size_t j = c; j < width_; ++j)
        row[j] = sub(row[j], mul(factor, pivot[j], p_), p_);
    }
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t width_;
  u64 p_;
  std::vector<std::size_t> pivot_of_col_;
  std::vector<std::size_t> pivot_cols_;
  std::vector<std::vector<u64>> rows_;
};

inline std::size_t rank(std::vector<std::vector<u64>> rows, std::size_t width, u64 p) {
  Eliminator e(width, p);
  for (auto& r : rows) e.insert(r);
  return e.rank();
}

} // namespace tamelink::fp
