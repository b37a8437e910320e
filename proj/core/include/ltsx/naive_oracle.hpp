#pragma once

#include <optional>

#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// Reference implementations of every navigation operation by direct link
// traversal over the arena tree.  Deliberately simple: this class is the
// correctness oracle for the compressed structure and must stay independent
// of it.
//
// Conventions (shared with the compressed structure):
//   * node identity is the 0-based preorder rank,
//   * depth(root) = 0, child indices and childrank are 0-based,
//   * level_ancestor(v, 0) = v; stepping past the root yields nullopt,
//   * childrank_label(v, a) counts siblings labeled `a` strictly before v,
//   * childselect_label(v, i, a) returns the i-th child labeled `a`, i >= 1,
//   * depth_label(v, a) counts proper ancestors labeled `a`,
//   * level_ancestor_label(v, i, a) is the i-th nearest proper ancestor
//     labeled `a`, i >= 1,
//   * child(v, i) with i >= degree(v) throws std::out_of_range.
class NaiveOracle {
 public:
  explicit NaiveOracle(const LabeledTree& t) : t_(t) {}

  size_t size() const { return t_.size(); }

  label_t label(node_t v) const { return t_.label(check(v)); }

  std::optional<node_t> parent(node_t v) const {
    node_t p = t_.parent(check(v));
    return p == NO_NODE ? std::nullopt : std::optional<node_t>(p);
  }

  std::optional<node_t> first_child(node_t v) const {
    node_t c = t_.first_child(check(v));
    return c == NO_NODE ? std::nullopt : std::optional<node_t>(c);
  }

  std::optional<node_t> next_sibling(node_t v) const {
    node_t s = t_.next_sibling(check(v));
    return s == NO_NODE ? std::nullopt : std::optional<node_t>(s);
  }

  node_t child(node_t v, uint32_t i) const {
    node_t c = t_.first_child(check(v));
    for (uint32_t k = 0; k < i && c != NO_NODE; ++k) c = t_.next_sibling(c);
    if (c == NO_NODE) throw std::out_of_range("child: index out of range");
    return c;
  }

  uint32_t childrank(node_t v) const {
    check(v);
    node_t p = t_.parent(v);
    if (p == NO_NODE) return 0;
    uint32_t r = 0;
    for (node_t c = t_.first_child(p); c != v; c = t_.next_sibling(c)) ++r;
    return r;
  }

  uint32_t depth(node_t v) const {
    check(v);
    uint32_t d = 0;
    for (node_t u = t_.parent(v); u != NO_NODE; u = t_.parent(u)) ++d;
    return d;
  }

  std::optional<node_t> level_ancestor(node_t v, uint32_t i) const {
    node_t u = check(v);
    for (; i > 0; --i) {
      u = t_.parent(u);
      if (u == NO_NODE) return std::nullopt;
    }
    return u;
  }

  node_t lca(node_t u, node_t v) const {
    check(u);
    check(v);
    uint32_t du = depth(u), dv = depth(v);
    while (du > dv) u = t_.parent(u), --du;
    while (dv > du) v = t_.parent(v), --dv;
    while (u != v) u = t_.parent(u), v = t_.parent(v);
    return u;
  }

  uint32_t preorder_rank(node_t v) const { return check(v); }
  node_t preorder_select(uint32_t i) const { return check(i); }

  // --- label-restricted operations --------------------------------------

  uint32_t childrank_label(node_t v, label_t a) const {
    check(v);
    node_t p = t_.parent(v);
    if (p == NO_NODE) return 0;
    uint32_t r = 0;
    for (node_t c = t_.first_child(p); c != v; c = t_.next_sibling(c))
      if (t_.label(c) == a) ++r;
    return r;
  }

  std::optional<node_t> childselect_label(node_t v, uint32_t i, label_t a) const {
    check(v);
    if (i == 0) throw std::invalid_argument("childselect_label: i is 1-based");
    for (node_t c = t_.first_child(v); c != NO_NODE; c = t_.next_sibling(c)) {
      if (t_.label(c) == a && --i == 0) return c;
    }
    return std::nullopt;
  }

  uint32_t depth_label(node_t v, label_t a) const {
    check(v);
    uint32_t d = 0;
    for (node_t u = t_.parent(v); u != NO_NODE; u = t_.parent(u))
      if (t_.label(u) == a) ++d;
    return d;
  }

  std::optional<node_t> level_ancestor_label(node_t v, uint32_t i, label_t a) const {
    check(v);
    if (i == 0) throw std::invalid_argument("level_ancestor_label: i is 1-based");
    for (node_t u = t_.parent(v); u != NO_NODE; u = t_.parent(u)) {
      if (t_.label(u) == a && --i == 0) return u;
    }
    return std::nullopt;
  }

 private:
  node_t check(node_t v) const {
    if (v >= t_.size()) throw std::out_of_range("oracle: node id out of range");
    return v;
  }

  const LabeledTree& t_;
};

}  // namespace ltsx
