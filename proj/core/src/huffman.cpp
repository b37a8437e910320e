#include "ltsx/huffman.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace ltsx {

Huffman Huffman::build(std::span<const uint64_t> counts) {
  const size_t n = counts.size();
  size_t coded = 0;
  for (uint64_t c : counts) coded += c > 0;
  if (coded == 0) throw std::invalid_argument("Huffman: no symbols");

  Huffman h;
  h.length_.assign(n, 0);
  if (coded == 1) {
    for (size_t i = 0; i < n; ++i) {
      if (counts[i] > 0) h.length_[i] = 1;
    }
    h.finish();
    return h;
  }

  // Frequency merge over (count, node id); the id tiebreak keeps the tree,
  // and with it the stored length table, deterministic.
  using Item = std::pair<uint64_t, uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  std::vector<uint32_t> parent(n + coded - 1, UINT32_MAX);
  uint32_t next = static_cast<uint32_t>(n);
  for (size_t i = 0; i < n; ++i) {
    if (counts[i] > 0) heap.emplace(counts[i], static_cast<uint32_t>(i));
  }
  while (heap.size() > 1) {
    const Item a = heap.top();
    heap.pop();
    const Item b = heap.top();
    heap.pop();
    parent[a.second] = next;
    parent[b.second] = next;
    heap.emplace(a.first + b.first, next);
    ++next;
  }
  // Depths top-down: internal nodes were created bottom-up, so a reverse
  // walk sees every parent before its children.
  std::vector<uint8_t> depth(next, 0);
  for (uint32_t v = next - 1; v-- > 0;) {
    if (parent[v] != UINT32_MAX) depth[v] = depth[parent[v]] + 1;
  }
  for (size_t i = 0; i < n; ++i) {
    if (counts[i] > 0) h.length_[i] = depth[i];
  }
  h.finish();
  return h;
}

Huffman Huffman::from_lengths(std::vector<uint8_t> lengths) {
  Huffman h;
  h.length_ = std::move(lengths);
  h.finish();
  return h;
}

void Huffman::finish() {
  const size_t n = length_.size();
  code_.assign(n, 0);
  max_len_ = 0;
  sorted_.clear();
  for (size_t i = 0; i < n; ++i) {
    if (length_[i] > 0) {
      sorted_.push_back(static_cast<uint32_t>(i));
      max_len_ = std::max(max_len_, length_[i]);
    }
  }
  if (sorted_.empty()) throw std::invalid_argument("Huffman: empty length table");
  if (max_len_ >= 64) throw std::invalid_argument("Huffman: code length overflow");
  std::stable_sort(sorted_.begin(), sorted_.end(), [&](uint32_t a, uint32_t b) {
    return length_[a] != length_[b] ? length_[a] < length_[b] : a < b;
  });

  first_code_.assign(max_len_ + 1, 0);
  first_index_.assign(max_len_ + 1, 0);
  count_.assign(max_len_ + 1, 0);
  for (uint32_t s : sorted_) ++count_[length_[s]];

  uint64_t c = 0;
  uint32_t idx = 0;
  for (uint8_t len = 1; len <= max_len_; ++len) {
    first_code_[len] = c;
    first_index_[len] = idx;
    for (uint32_t j = 0; j < count_[len]; ++j) {
      code_[sorted_[idx]] = c;
      ++c;
      ++idx;
    }
    // Canonical feasibility (Kraft): the codes of each length must fit.
    if (c > (uint64_t{1} << len)) {
      throw std::invalid_argument("Huffman: length table violates Kraft");
    }
    c <<= 1;
  }
}

uint64_t Huffman::cost_bits(std::span<const uint64_t> counts) const {
  uint64_t total = 0;
  for (size_t i = 0; i < counts.size() && i < length_.size(); ++i) {
    total += counts[i] * length_[i];
  }
  return total;
}

void Huffman::append(BitBuffer& out, uint32_t sym) const {
  const uint8_t len = length_[sym];
  if (len == 0) throw std::invalid_argument("Huffman: symbol has no code");
  const uint64_t c = code_[sym];
  for (int b = len - 1; b >= 0; --b) out.push_bit((c >> b) & 1);
}

uint32_t Huffman::decode(const BitVector& bits, size_t pos) const {
  uint64_t val = 0;
  for (uint8_t len = 1; len <= max_len_; ++len) {
    if (pos >= bits.size())
      throw std::invalid_argument("Huffman: truncated code");
    val = (val << 1) | static_cast<uint64_t>(bits.get(pos++));
    if (count_[len] > 0 && val - first_code_[len] < count_[len]) {
      return sorted_[first_index_[len] + (val - first_code_[len])];
    }
  }
  throw std::invalid_argument("Huffman: invalid code");
}

}  // namespace ltsx
