#include "corpus.hpp"

#include <stdexcept>

namespace ltsx::testsup {

namespace {

// Every ordered tree arises exactly once by attaching each new preorder node
// to some node on the rightmost path of the tree built so far.
void extend(std::vector<node_t>& parent, std::vector<node_t>& chain,
            uint32_t n, std::vector<std::vector<node_t>>& out) {
  if (parent.size() == n) {
    out.push_back(parent);
    return;
  }
  node_t id = static_cast<node_t>(parent.size());
  for (size_t pos = 0; pos < chain.size(); ++pos) {
    parent.push_back(chain[pos]);
    std::vector<node_t> sub(chain.begin(), chain.begin() + pos + 1);
    sub.push_back(id);
    extend(parent, sub, n, out);
    parent.pop_back();
  }
}

}  // namespace

std::vector<std::vector<node_t>> all_shapes(uint32_t n) {
  if (n == 0) throw std::invalid_argument("all_shapes: n must be positive");
  std::vector<std::vector<node_t>> out;
  std::vector<node_t> parent{NO_NODE};
  std::vector<node_t> chain{0};
  extend(parent, chain, n, out);
  return out;
}

LabeledTree label_shape(const std::vector<node_t>& parent, uint32_t sigma,
                        Labeling how) {
  if (sigma == 0) throw std::invalid_argument("label_shape: sigma must be positive");
  LabeledTree t;
  for (uint32_t i = 0; i < sigma; ++i) t.alphabet().intern(gen_token(i, sigma));
  std::vector<uint32_t> depth(parent.size(), 0);
  for (size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] != NO_NODE) depth[v] = depth[parent[v]] + 1;
    label_t l;
    if (how == Labeling::kByDepth) {
      l = static_cast<label_t>(depth[v] % sigma);
    } else {
      uint64_t h = (v + 1) * 0x9E3779B97F4A7C15ull;
      l = static_cast<label_t>((h >> 32) % sigma);
    }
    t.append_preorder(parent[v], l);
  }
  t.check();
  return t;
}

CorrelatedSpec label_determines_degree(size_t n) {
  CorrelatedSpec s;
  s.n = n;
  s.sigma = 4;
  s.rule.root_dist = {1.0, 0.0, 0.0, 0.0};
  s.rule.label_given_parent = {
      {0.05, 0.80, 0.10, 0.05},  // under a: mostly b
      {0.05, 0.10, 0.80, 0.05},  // under b: mostly c
      {0.10, 0.10, 0.10, 0.70},  // under c: mostly d
      {0.25, 0.25, 0.25, 0.25},  // under d: unused (d is a leaf)
  };
  s.rule.degree_given_label = {
      {{3, 1.0}},
      {{2, 1.0}},
      {{1, 1.0}},
      {{0, 1.0}},
  };
  s.rule.leaf_label = 3;          // d, whose law is degree 0
  s.rule.continuation_label = 2;  // c, whose law is degree 1
  return s;
}

}  // namespace ltsx::testsup
