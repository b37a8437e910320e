#include "ltsx/bp_tree.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace ltsx {

namespace {
constexpr size_t kWordBits = 64;
constexpr size_t kWordsPerSuper = 64;
constexpr size_t kSuperBits = kWordBits * kWordsPerSuper;
}  // namespace

BPTree::BPTree(const LabeledTree& t) {
  if (t.size() == 0) throw std::invalid_argument("BPTree: empty tree");
  BitBuffer buf;
  // DFS, opening a node on the way down and closing it once its children
  // are done.  The stack holds nodes whose parenthesis is still open.
  std::vector<node_t> stack;
  buf.push_bit(true);
  stack.push_back(0);
  node_t next = t.first_child(0);
  while (!stack.empty()) {
    if (next != NO_NODE) {
      buf.push_bit(true);
      stack.push_back(next);
      next = t.first_child(next);
    } else {
      buf.push_bit(false);
      node_t done = stack.back();
      stack.pop_back();
      next = t.next_sibling(done);
    }
  }
  bits_ = BitVector(buf);
  finish_build();
}

BPTree BPTree::from_bits(BitVector bits) {
  BPTree r;
  r.bits_ = std::move(bits);
  r.finish_build();
  return r;
}

void BPTree::finish_build() {
  const size_t nbits = bits_.size();
  if (nbits == 0 || nbits % 2 != 0 || !bits_.get(0)) {
    throw std::invalid_argument("BPTree: not a parenthesis sequence");
  }
  nodes_ = bits_.ones();
  if (nodes_ * 2 != nbits) {
    throw std::invalid_argument("BPTree: unbalanced parentheses");
  }
  const size_t nwords = (nbits + kWordBits - 1) / kWordBits;
  word_min_.assign(nwords, 0);
  super_min_.assign((nwords + kWordsPerSuper - 1) / kWordsPerSuper, 0);

  int64_t cur = 0;         // E(p) while p walks forward
  int64_t super_base = 0;  // E at the start of the current superblock
  int64_t super_min = 0;
  for (size_t w = 0; w < nwords; ++w) {
    if (w % kWordsPerSuper == 0) {
      super_base = cur;
      super_min = INT64_MAX;
    }
    const int64_t word_base = cur;
    int64_t word_min = INT64_MAX;
    const size_t hi = std::min(nbits, (w + 1) * kWordBits);
    for (size_t p = w * kWordBits; p < hi; ++p) {
      cur += bits_.get(p) ? 1 : -1;
      if (cur < 0 || (cur == 0 && p + 1 != nbits)) {
        throw std::invalid_argument("BPTree: parentheses close a second root");
      }
      word_min = std::min(word_min, cur - word_base);
      super_min = std::min(super_min, cur - super_base);
    }
    word_min_[w] = static_cast<int8_t>(word_min);
    if ((w + 1) % kWordsPerSuper == 0 || w + 1 == nwords) {
      super_min_[w / kWordsPerSuper] = static_cast<int16_t>(super_min);
    }
  }
  if (cur != 0) throw std::invalid_argument("BPTree: unbalanced parentheses");
}

// Least q >= from with E(q) == target.  Callers always search for a target
// strictly below E(from), so inside a word the target is reached iff the
// word's minimum dips to it.
size_t BPTree::fwd_search(size_t from, int64_t target) const {
  const size_t nbits = bits_.size();
  size_t q = from;
  int64_t cur = excess(q);
  // Bitwise to the next word boundary.
  while (true) {
    if (cur == target) return q;
    if (q == nbits) return npos;
    if (q % kWordBits == 0 && q != from) break;
    cur += bits_.get(q) ? 1 : -1;
    ++q;
    if (q % kWordBits == 0) {
      if (cur == target) return q;
      if (q == nbits) return npos;
      break;
    }
  }
  size_t w = q / kWordBits;
  const size_t nwords = (nbits + kWordBits - 1) / kWordBits;
  while (w < nwords) {
    if (w % kWordsPerSuper == 0) {
      const size_t s = w / kWordsPerSuper;
      if (cur + super_min_[s] > target) {
        q = std::min(nbits, (s + 1) * kSuperBits);
        cur = excess(q);
        if (cur == target) return q;
        if (q == nbits) return npos;
        w = q / kWordBits;
        continue;
      }
    }
    if (cur + word_min_[w] <= target) {
      const size_t hi = std::min(nbits, (w + 1) * kWordBits);
      while (q < hi) {
        cur += bits_.get(q) ? 1 : -1;
        ++q;
        if (cur == target) return q;
      }
      if (q == nbits) return npos;
    } else {
      const size_t real = std::min(nbits, (w + 1) * kWordBits) - w * kWordBits;
      cur += 2 * static_cast<int64_t>(std::popcount(bits_.words()[w])) -
             static_cast<int64_t>(real);
      q = w * kWordBits + real;
      if (cur == target) return q;
      if (q == nbits) return npos;
    }
    ++w;
  }
  return npos;
}

// Greatest p <= from with E(p) == target; npos when none.
size_t BPTree::bwd_search(size_t from, int64_t target) const {
  size_t q = from;
  int64_t cur = excess(q);
  // Bitwise down to the word boundary at or below `from`.
  while (true) {
    if (cur == target) return q;
    if (q % kWordBits == 0) break;
    --q;
    cur -= bits_.get(q) ? 1 : -1;
  }
  if (q == 0) return npos;
  size_t w = q / kWordBits - 1;  // next word to inspect, fully below q
  while (true) {
    if ((w + 1) % kWordsPerSuper == 0) {
      const size_t s = w / kWordsPerSuper;
      const int64_t base = excess(s * kSuperBits);
      if (std::min(base, base + super_min_[s]) > target) {
        q = s * kSuperBits;
        if (q == 0) return npos;
        w = q / kWordBits - 1;
        continue;
      }
    }
    const int64_t base = excess(w * kWordBits);
    if (std::min(base, base + word_min_[w]) <= target) {
      cur = excess(q);
      while (q > w * kWordBits) {
        --q;
        cur -= bits_.get(q) ? 1 : -1;
        if (cur == target) return q;
      }
    } else {
      q = w * kWordBits;
    }
    if (q == 0 || w == 0) return npos;
    --w;
  }
}

// Minimum of E(p) over p in [a, b].
int64_t BPTree::range_min_excess(size_t a, size_t b) const {
  size_t q = a;
  int64_t cur = excess(q);
  int64_t m = cur;
  while (q < b) {
    if (q % kWordBits == 0) {
      const size_t w = q / kWordBits;
      if (q % kSuperBits == 0 && q + kSuperBits <= b) {
        m = std::min(m, cur + super_min_[w / kWordsPerSuper]);
        q += kSuperBits;
        cur = excess(q);
        continue;
      }
      if (q + kWordBits <= b) {
        m = std::min(m, cur + word_min_[w]);
        cur += 2 * static_cast<int64_t>(std::popcount(bits_.words()[w])) - 64;
        q += kWordBits;
        continue;
      }
    }
    cur += bits_.get(q) ? 1 : -1;
    ++q;
    m = std::min(m, cur);
  }
  return m;
}

size_t BPTree::find_close(size_t p) const {
  const size_t q = fwd_search(p + 1, excess(p));
  if (q == npos) throw std::logic_error("BPTree: unmatched parenthesis");
  return q - 1;
}

std::optional<node_t> BPTree::parent(node_t v) const {
  const size_t p = pos(v);
  const size_t q = bwd_search(p, excess(p) - 1);
  if (q == npos) return std::nullopt;
  return node_at(q);
}

std::optional<node_t> BPTree::first_child(node_t v) const {
  const size_t p = pos(v);
  if (!bits_.get(p + 1)) return std::nullopt;
  return v + 1;  // preorder: the first child follows immediately
}

std::optional<node_t> BPTree::next_sibling(node_t v) const {
  const size_t c = find_close(pos(v));
  if (c + 1 >= bits_.size() || !bits_.get(c + 1)) return std::nullopt;
  return node_at(c + 1);
}

std::optional<node_t> BPTree::prev_sibling(node_t v) const {
  const size_t p = pos(v);
  if (p == 0 || bits_.get(p - 1)) return std::nullopt;
  const size_t open = bwd_search(p - 1, excess(p - 1) - 1);
  return node_at(open);
}

node_t BPTree::child(node_t v, uint32_t i) const {
  std::optional<node_t> c = first_child(v);
  for (uint32_t k = 0; k < i && c; ++k) c = next_sibling(*c);
  if (!c) throw std::out_of_range("BPTree::child: no such child");
  return *c;
}

uint32_t BPTree::childrank(node_t v) const {
  uint32_t r = 0;
  for (std::optional<node_t> p = prev_sibling(v); p; p = prev_sibling(*p)) ++r;
  return r;
}

uint32_t BPTree::degree(node_t v) const {
  uint32_t d = 0;
  for (std::optional<node_t> c = first_child(v); c; c = next_sibling(*c)) ++d;
  return d;
}

uint32_t BPTree::depth(node_t v) const {
  return static_cast<uint32_t>(excess(pos(v)));
}

std::optional<node_t> BPTree::level_ancestor(node_t v, uint32_t steps) const {
  if (steps == 0) return v;
  const size_t p = pos(v);
  const int64_t d = excess(p);
  if (steps > d) return std::nullopt;
  return node_at(bwd_search(p, d - steps));
}

node_t BPTree::lca(node_t u, node_t v) const {
  if (u == v) return u;
  const size_t px = pos(std::min(u, v));
  const size_t py = pos(std::max(u, v));
  const int64_t m = range_min_excess(px + 1, py);
  return node_at(bwd_search(py, m - 1));
}

node_t BPTree::preorder_select(uint32_t i) const {
  if (i >= nodes_) throw std::out_of_range("BPTree::preorder_select");
  return i;
}

size_t BPTree::subtree_count(node_t v) const {
  const size_t p = pos(v);
  return (find_close(p) - p + 1) / 2;
}

size_t BPTree::space_bits() const {
  return bits_.payload_bits() + bits_.overhead_bits() +
         word_min_.size() * 8 + super_min_.size() * 16;
}

}  // namespace ltsx
