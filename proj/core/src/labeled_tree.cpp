#include "ltsx/labeled_tree.hpp"

namespace ltsx {

LabeledTree LabeledTree::from_children(const Alphabet& alpha,
                                       const std::vector<label_t>& labels,
                                       const std::vector<std::vector<uint32_t>>& children,
                                       uint32_t root) {
  if (labels.size() != children.size())
    throw std::invalid_argument("from_children: labels/children size mismatch");
  if (labels.empty()) throw std::invalid_argument("from_children: empty tree");

  LabeledTree t;
  t.alphabet_ = alpha;
  t.label_.reserve(labels.size());

  // Iterative preorder walk; frame = (input node, parent in new numbering).
  std::vector<std::pair<uint32_t, node_t>> stack;
  stack.emplace_back(root, NO_NODE);
  while (!stack.empty()) {
    auto [u, par] = stack.back();
    stack.pop_back();
    node_t id = t.append_preorder(par, labels[u]);
    const auto& cs = children[u];
    for (size_t i = cs.size(); i-- > 0;) stack.emplace_back(cs[i], id);
  }
  if (t.size() != labels.size())
    throw std::invalid_argument("from_children: disconnected input");
  return t;
}

bool LabeledTree::equal(const LabeledTree& o) const {
  if (size() != o.size()) return false;
  for (node_t v = 0; v < size(); ++v) {
    if (parent_[v] != o.parent_[v]) return false;
    if (first_child_[v] != o.first_child_[v]) return false;
    if (next_sibling_[v] != o.next_sibling_[v]) return false;
    if (token(v) != o.token(v)) return false;
  }
  return true;
}

void LabeledTree::check() const {
  if (empty()) throw std::logic_error("tree check: empty");
  if (parent_[0] != NO_NODE) throw std::logic_error("tree check: root parent");
  for (node_t v = 1; v < size(); ++v) {
    if (parent_[v] == NO_NODE || parent_[v] >= v)
      throw std::logic_error("tree check: bad parent order");
  }
  for (node_t v = 0; v < size(); ++v) {
    uint32_t d = 0;
    node_t prev = NO_NODE;
    for (node_t c = first_child_[v]; c != NO_NODE; c = next_sibling_[c]) {
      if (parent_[c] != v) throw std::logic_error("tree check: child link");
      if (prev != NO_NODE && !(prev < c)) throw std::logic_error("tree check: sibling order");
      prev = c;
      ++d;
    }
    if (d != degree_[v]) throw std::logic_error("tree check: degree");
    if (label_[v] >= alphabet_.size()) throw std::logic_error("tree check: label id");
  }
}

}  // namespace ltsx
