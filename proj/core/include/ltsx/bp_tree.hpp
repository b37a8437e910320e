#pragma once

#include <optional>

#include "ltsx/bit_vector.hpp"
#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// Balanced-parentheses tree shape.  2n bits (1 = open, 0 = close) in DFS
// order plus the rank/select directory and small per-word / per-superblock
// excess minima for parenthesis matching.
//
// Node identity is the 0-based preorder rank, like everywhere else in this
// project.  Navigation is built on prefix excess E(p) = rank1(p) - rank0(p):
// for the opening parenthesis of v, E(pos(v)) = depth(v), and the matching
// scan primitives are
//   fwd_search(from, t): least  q >= from with E(q) = t,
//   bwd_search(from, t): greatest p <= from with E(p) = t.
//
// child(v, i) and childrank(v) walk sibling links and cost O(i) matchings;
// the compressed tree structure keeps its own constant-time child tables, so
// these are convenience/testing paths here.
class BPTree {
 public:
  BPTree() = default;
  explicit BPTree(const LabeledTree& t);

  // Wraps an existing parentheses bit string (validated).
  static BPTree from_bits(BitVector bits);

  size_t node_count() const { return nodes_; }
  size_t bit_count() const { return bits_.size(); }
  const BitVector& bits() const { return bits_; }

  size_t pos(node_t v) const { return bits_.select1(v + 1); }
  node_t node_at(size_t open_pos) const {
    return static_cast<node_t>(bits_.rank1(open_pos + 1) - 1);
  }

  std::optional<node_t> parent(node_t v) const;
  std::optional<node_t> first_child(node_t v) const;
  std::optional<node_t> next_sibling(node_t v) const;
  std::optional<node_t> prev_sibling(node_t v) const;
  node_t child(node_t v, uint32_t i) const;       // throws std::out_of_range
  uint32_t childrank(node_t v) const;
  uint32_t degree(node_t v) const;
  uint32_t depth(node_t v) const;
  std::optional<node_t> level_ancestor(node_t v, uint32_t steps) const;
  node_t lca(node_t u, node_t v) const;
  uint32_t preorder_rank(node_t v) const { return v; }
  node_t preorder_select(uint32_t i) const;

  // Nodes in the subtree of v (v included).
  size_t subtree_count(node_t v) const;

  size_t space_bits() const;

  // Exposed for the weighted-depth structures: position of the closing
  // parenthesis matching the open parenthesis at position p.
  size_t find_close(size_t p) const;

 private:
  void finish_build();

  int64_t excess(size_t p) const {
    return 2 * static_cast<int64_t>(bits_.rank1(p)) - static_cast<int64_t>(p);
  }
  // Scan primitives; npos when no such position exists.
  size_t fwd_search(size_t from, int64_t target) const;
  size_t bwd_search(size_t from, int64_t target) const;
  int64_t range_min_excess(size_t a, size_t b) const;  // min E(p), p in [a, b]

  static constexpr size_t npos = static_cast<size_t>(-1);

  BitVector bits_;
  size_t nodes_ = 0;
  std::vector<int8_t> word_min_;    // min prefix excess within word, rel. to word start
  std::vector<int16_t> super_min_;  // same per 64-word superblock
};

}  // namespace ltsx
