#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ltsx {

using node_t = uint32_t;
using label_t = uint32_t;

inline constexpr node_t NO_NODE = std::numeric_limits<node_t>::max();

// Token <-> dense label id mapping.  Ids are assigned in first-appearance
// order, so the same document always produces the same alphabet.
class Alphabet {
 public:
  label_t intern(const std::string& token) {
    auto it = index_.find(token);
    if (it != index_.end()) return it->second;
    label_t id = static_cast<label_t>(tokens_.size());
    tokens_.push_back(token);
    index_.emplace(tokens_.back(), id);
    return id;
  }

  // Lookup without inserting; returns false if the token is unknown.
  bool find(const std::string& token, label_t& out) const {
    auto it = index_.find(token);
    if (it == index_.end()) return false;
    out = it->second;
    return true;
  }

  const std::string& token(label_t id) const { return tokens_.at(id); }
  size_t size() const { return tokens_.size(); }

  const std::vector<std::string>& tokens() const { return tokens_; }

  static Alphabet from_tokens(std::vector<std::string> toks) {
    Alphabet a;
    for (auto& t : toks) a.intern(t);
    return a;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, label_t> index_;
};

// Ordered rooted labeled tree in a flat arena.  Node identity is the 0-based
// preorder rank; node 0 is the root.  Sibling order is explicit via
// first_child/next_sibling links, and the children of a node always carry
// consecutive subtree ranges in preorder.
class LabeledTree {
 public:
  LabeledTree() = default;

  size_t size() const { return label_.size(); }
  bool empty() const { return label_.empty(); }
  size_t sigma() const { return alphabet_.size(); }

  label_t label(node_t v) const { return label_[v]; }
  node_t parent(node_t v) const { return parent_[v]; }
  node_t first_child(node_t v) const { return first_child_[v]; }
  node_t next_sibling(node_t v) const { return next_sibling_[v]; }
  uint32_t degree(node_t v) const { return degree_[v]; }

  const Alphabet& alphabet() const { return alphabet_; }
  Alphabet& alphabet() { return alphabet_; }

  const std::string& token(node_t v) const { return alphabet_.token(label_[v]); }

  // Number of nodes in the subtree rooted at v (v included).  O(subtree).
  size_t subtree_size(node_t v) const {
    size_t cnt = 1;
    for (node_t c = first_child_[v]; c != NO_NODE; c = next_sibling_[c])
      cnt += subtree_size(c);
    return cnt;
  }

  // --- construction -----------------------------------------------------

  // Appends a node in preorder position; parent must already exist (or be
  // NO_NODE for the root, which must come first).  Returns the new id.
  node_t append_preorder(node_t parent, label_t label) {
    node_t id = static_cast<node_t>(label_.size());
    if (parent == NO_NODE && id != 0)
      throw std::invalid_argument("LabeledTree: only node 0 may be the root");
    if (parent != NO_NODE && parent >= id)
      throw std::invalid_argument("LabeledTree: parent must precede child in preorder");
    label_.push_back(label);
    parent_.push_back(parent);
    first_child_.push_back(NO_NODE);
    next_sibling_.push_back(NO_NODE);
    last_child_.push_back(NO_NODE);
    degree_.push_back(0);
    if (parent != NO_NODE) {
      if (first_child_[parent] == NO_NODE)
        first_child_[parent] = id;
      else
        next_sibling_[last_child_[parent]] = id;
      last_child_[parent] = id;
      degree_[parent]++;
    }
    return id;
  }

  // Builds a tree from adjacency lists in any node numbering; nodes are
  // renumbered to preorder.  `labels[i]` is the label of input node i.
  static LabeledTree from_children(const Alphabet& alpha,
                                   const std::vector<label_t>& labels,
                                   const std::vector<std::vector<uint32_t>>& children,
                                   uint32_t root);

  // Structural + label equality (same alphabet tokens per node).
  bool equal(const LabeledTree& o) const;

  // Cheap internal consistency check; throws std::logic_error on violation.
  void check() const;

 private:
  friend class TreeParser;

  Alphabet alphabet_;
  std::vector<label_t> label_;
  std::vector<node_t> parent_;
  std::vector<node_t> first_child_;
  std::vector<node_t> next_sibling_;
  std::vector<node_t> last_child_;
  std::vector<uint32_t> degree_;
};

}  // namespace ltsx
