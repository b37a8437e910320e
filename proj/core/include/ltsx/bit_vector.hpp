#pragma once

#include <cstdint>
#include <vector>

namespace ltsx {

// Append-only bit sink used to assemble code streams and serialized
// sections.  Bit 0 of word 0 is the first appended bit.
class BitBuffer {
 public:
  void push_bit(bool b) {
    size_t w = nbits_ / 64, o = nbits_ % 64;
    if (o == 0) words_.push_back(0);
    if (b) words_[w] |= uint64_t{1} << o;
    ++nbits_;
  }

  // Appends `width` bits of `value`, least-significant first.
  void push_bits(uint64_t value, uint32_t width) {
    for (uint32_t i = 0; i < width; ++i) push_bit((value >> i) & 1);
  }

  size_t size() const { return nbits_; }
  const std::vector<uint64_t>& words() const { return words_; }

  bool get(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

  uint64_t get_bits(size_t i, uint32_t width) const {
    uint64_t v = 0;
    for (uint32_t j = 0; j < width; ++j)
      if (get(i + j)) v |= uint64_t{1} << j;
    return v;
  }

 private:
  std::vector<uint64_t> words_;
  size_t nbits_ = 0;
};

// Immutable bit vector with O(1) rank and near-O(1) select.
//
// Rank directory: superblocks of 512 bits carry absolute 1-counts, the eight
// 64-bit blocks inside carry 16-bit relative counts; a query is two table
// reads plus one popcount.  Select binary-searches the superblock counts,
// walks at most eight blocks and finishes inside one word.
class BitVector {
 public:
  BitVector() = default;
  BitVector(std::vector<uint64_t> words, size_t nbits);
  explicit BitVector(const BitBuffer& b) : BitVector(b.words(), b.size()) {}

  size_t size() const { return nbits_; }
  bool get(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

  // Number of 1s (resp. 0s) in [0, i); i may equal size().
  size_t rank1(size_t i) const;
  size_t rank0(size_t i) const { return i - rank1(i); }

  size_t ones() const { return ones_; }
  size_t zeros() const { return nbits_ - ones_; }

  // Position of the j-th 1 (resp. 0), 1-based j; throws std::out_of_range
  // when j exceeds the population.
  size_t select1(size_t j) const;
  size_t select0(size_t j) const;

  const std::vector<uint64_t>& words() const { return words_; }

  // Payload plus directory footprint, in bits.
  size_t payload_bits() const { return nbits_; }
  size_t overhead_bits() const;

 private:
  void build_directory();

  std::vector<uint64_t> words_;
  size_t nbits_ = 0;
  size_t ones_ = 0;
  std::vector<uint64_t> super_;   // absolute 1-count before each superblock
  std::vector<uint16_t> block_;   // 1-count before each word, within superblock
};

}  // namespace ltsx
