#pragma once

#include <span>
#include <stdexcept>

#include "ltsx/bit_vector.hpp"

namespace ltsx {

// Static prefix-sum structure over non-negative integers, stored in unary:
// value v contributes v zeros followed by a terminating one, so an array of
// n_t values with total S occupies S + n_t bits plus rank/select overhead.
//
// Indices are 1-based to match the usual sum(i..j) formulation:
//   sum(i, j)  = T[i] + ... + T[j]
//   find(x)    = least i with T[1] + ... + T[i] >= x, or n_t + 1 (sentinel)
//                when the grand total is below x.
class PartialSums {
 public:
  PartialSums() = default;

  explicit PartialSums(std::span<const uint64_t> values) {
    BitBuffer b;
    for (uint64_t v : values) {
      for (uint64_t z = 0; z < v; ++z) b.push_bit(false);
      b.push_bit(true);
    }
    bits_ = BitVector(b);
    count_ = values.size();
  }

  // Reconstructs from a previously serialized unary stream.
  PartialSums(BitVector bits, size_t count) : bits_(std::move(bits)), count_(count) {
    if (bits_.ones() != count_) throw std::invalid_argument("PartialSums: bad unary stream");
  }

  size_t count() const { return count_; }
  uint64_t total() const { return bits_.zeros(); }

  // Sum of the first i values, i in [0, count].
  uint64_t prefix(size_t i) const {
    if (i == 0) return 0;
    if (i > count_) throw std::out_of_range("PartialSums::prefix");
    return bits_.select1(i) - (i - 1);
  }

  uint64_t sum(size_t i, size_t j) const {
    if (i == 0 || j + 1 == 0 || i > j + 1) throw std::out_of_range("PartialSums::sum");
    if (j < i) return 0;
    return prefix(j) - prefix(i - 1);
  }

  uint64_t value(size_t i) const { return sum(i, i); }

  // Least i with prefix(i) >= x (x >= 1); count()+1 when total() < x.
  size_t find(uint64_t x) const {
    if (x == 0) throw std::out_of_range("PartialSums::find: x is 1-based");
    if (x > total()) return count_ + 1;
    size_t z = bits_.select0(x);
    return bits_.rank1(z) + 1;
  }

  const BitVector& bits() const { return bits_; }
  size_t space_bits() const { return bits_.payload_bits() + bits_.overhead_bits(); }

 private:
  BitVector bits_;
  size_t count_ = 0;
};

}  // namespace ltsx
