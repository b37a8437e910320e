#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltsx/bit_vector.hpp"

namespace ltsx {

// Canonical Huffman code.  Lengths come from the usual frequency merge; code
// values are then reassigned canonically (symbols sorted by length, ties by
// symbol id, codes counted upward).  Because only the lengths matter, a code
// can be rebuilt exactly from its length table, which is what the container
// stores.  Codes are written most significant bit first.
class Huffman {
 public:
  Huffman() = default;

  // counts[i] == 0 means symbol i gets no code; at least one count must be
  // positive.  A single coded symbol gets the 1-bit code "0".
  static Huffman build(std::span<const uint64_t> counts);

  // Rebuilds codes from a stored length table (0 = uncoded symbol).
  static Huffman from_lengths(std::vector<uint8_t> lengths);

  size_t symbols() const { return length_.size(); }
  uint8_t length(uint32_t sym) const { return length_[sym]; }
  uint64_t code(uint32_t sym) const { return code_[sym]; }
  const std::vector<uint8_t>& lengths() const { return length_; }
  uint8_t max_length() const { return max_len_; }

  // Total payload bits this code spends on the given counts.
  uint64_t cost_bits(std::span<const uint64_t> counts) const;

  void append(BitBuffer& out, uint32_t sym) const;

  // Decodes the code starting at bit `pos`; throws std::invalid_argument on
  // a bit pattern that is no code or runs past the end.
  uint32_t decode(const BitVector& bits, size_t pos) const;

 private:
  void finish();  // canonical codes + decode tables from length_

  std::vector<uint8_t> length_;
  std::vector<uint64_t> code_;
  uint8_t max_len_ = 0;
  // Decode tables indexed by length 1..max_len_.
  std::vector<uint64_t> first_code_;   // canonical value of first code
  std::vector<uint32_t> first_index_;  // index into sorted_ of that code
  std::vector<uint32_t> count_;        // codes of this length
  std::vector<uint32_t> sorted_;       // symbols ordered by (length, id)
};

}  // namespace ltsx
