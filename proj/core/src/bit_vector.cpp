#include "ltsx/bit_vector.hpp"

#include <bit>
#include <stdexcept>

namespace ltsx {

namespace {

constexpr size_t kSuperBits = 512;
constexpr size_t kWordsPerSuper = kSuperBits / 64;

// Position (0..63) of the j-th set bit of w, 1-based j; j <= popcount(w).
inline uint32_t select_in_word(uint64_t w, uint32_t j) {
  for (uint32_t byte = 0; byte < 8; ++byte) {
    uint32_t c = std::popcount(static_cast<uint32_t>((w >> (byte * 8)) & 0xFF));
    if (j <= c) {
      uint32_t bits = static_cast<uint32_t>((w >> (byte * 8)) & 0xFF);
      for (uint32_t b = 0;; ++b) {
        if ((bits >> b) & 1) {
          if (--j == 0) return byte * 8 + b;
        }
      }
    }
    j -= c;
  }
  throw std::logic_error("select_in_word: not enough bits");
}

}  // namespace

BitVector::BitVector(std::vector<uint64_t> words, size_t nbits)
    : words_(std::move(words)), nbits_(nbits) {
  size_t need = (nbits_ + 63) / 64;
  if (words_.size() < need) words_.resize(need, 0);
  // Clear slack past nbits so popcounts stay exact.
  if (nbits_ % 64 != 0 && !words_.empty())
    words_[need - 1] &= (uint64_t{1} << (nbits_ % 64)) - 1;
  words_.resize(need);
  build_directory();
}

void BitVector::build_directory() {
  size_t nwords = words_.size();
  size_t nsuper = nwords / kWordsPerSuper + 1;
  super_.assign(nsuper, 0);
  block_.assign(nwords + 1, 0);
  uint64_t total = 0;
  uint16_t within = 0;
  for (size_t w = 0; w < nwords; ++w) {
    if (w % kWordsPerSuper == 0) {
      super_[w / kWordsPerSuper] = total;
      within = 0;
    }
    block_[w] = within;
    uint32_t pc = std::popcount(words_[w]);
    within = static_cast<uint16_t>(within + pc);
    total += pc;
  }
  if (nwords % kWordsPerSuper == 0) {
    // Position nwords*64 opens a fresh superblock; keep the tail entries
    // consistent with the reset so rank at the very end never double-counts.
    if (nsuper > nwords / kWordsPerSuper) super_[nwords / kWordsPerSuper] = total;
    block_[nwords] = 0;
  } else {
    block_[nwords] = within;
  }
  ones_ = total;
}

size_t BitVector::rank1(size_t i) const {
  size_t w = i / 64, o = i % 64;
  size_t r = super_[w / kWordsPerSuper] + block_[w];
  if (o != 0) r += std::popcount(words_[w] & ((uint64_t{1} << o) - 1));
  return r;
}

size_t BitVector::select1(size_t j) const {
  if (j == 0 || j > ones_) throw std::out_of_range("select1: rank out of range");
  // Superblock: greatest s with super_[s] < j.
  size_t lo = 0, hi = super_.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi + 1) / 2;
    if (super_[mid] < j)
      lo = mid;
    else
      hi = mid - 1;
  }
  size_t rem = j - super_[lo];
  size_t w = lo * kWordsPerSuper;
  size_t wend = std::min(words_.size(), w + kWordsPerSuper);
  while (w + 1 < wend && block_[w + 1] < rem) ++w;
  rem -= block_[w];
  return w * 64 + select_in_word(words_[w], static_cast<uint32_t>(rem));
}

size_t BitVector::select0(size_t j) const {
  if (j == 0 || j > zeros()) throw std::out_of_range("select0: rank out of range");
  // Same structure as select1 on complement counts (positions * 64 - ones).
  auto zeros_before_super = [&](size_t s) { return s * kSuperBits - super_[s]; };
  size_t lo = 0, hi = super_.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi + 1) / 2;
    if (zeros_before_super(mid) < j)
      lo = mid;
    else
      hi = mid - 1;
  }
  size_t rem = j - zeros_before_super(lo);
  size_t w = lo * kWordsPerSuper;
  size_t wend = std::min(words_.size(), w + kWordsPerSuper);
  auto zeros_in_block_prefix = [&](size_t wi) { return (wi - lo * kWordsPerSuper) * 64 - block_[wi]; };
  while (w + 1 < wend && zeros_in_block_prefix(w + 1) < rem) ++w;
  rem -= zeros_in_block_prefix(w);
  return w * 64 + select_in_word(~words_[w], static_cast<uint32_t>(rem));
}

size_t BitVector::overhead_bits() const {
  return super_.size() * 64 + block_.size() * 16;
}

}  // namespace ltsx
