#include "ltsx/clustering.hpp"

#include <stdexcept>

namespace ltsx {

namespace {

// Assigns cluster id `id` to the pending trees rooted at `group`.  A pending
// tree contains its root plus, for every member that kept its children
// (sheds == 0), the pending trees of those children.
void assign_group(const LabeledTree& t, const std::vector<uint8_t>& sheds,
                  const std::vector<node_t>& group, uint32_t id,
                  std::vector<uint32_t>& cluster_of,
                  std::vector<node_t>& stack) {
  stack.assign(group.begin(), group.end());
  while (!stack.empty()) {
    const node_t x = stack.back();
    stack.pop_back();
    cluster_of[x] = id;
    if (!sheds[x]) {
      for (node_t c = t.first_child(x); c != NO_NODE; c = t.next_sibling(c)) {
        stack.push_back(c);
      }
    }
  }
}

}  // namespace

Clustering cluster_greedy(const LabeledTree& t, uint64_t m) {
  if (m == 0) throw std::invalid_argument("cluster_greedy: m must be >= 1");
  const size_t n = t.size();
  Clustering out;
  out.m = m;
  out.cluster_of.assign(n, 0);
  out.is_port.assign(n, 0);

  // pend[v]: nodes still attached to v after its children were handled.
  // sheds[v]: v emitted every child group, so v continues alone.
  std::vector<uint64_t> pend(n, 1);
  std::vector<uint8_t> sheds(n, 0);
  std::vector<node_t> group, stack;

  // Children carry larger preorder ids than their parent, so a descending
  // scan sees every child before its parent.
  for (size_t i = n; i-- > 0;) {
    const node_t v = static_cast<node_t>(i);
    uint64_t below = 0;
    for (node_t c = t.first_child(v); c != NO_NODE; c = t.next_sibling(c)) {
      below += pend[c];
    }
    if (below < m) {
      pend[v] = 1 + below;
      continue;
    }
    sheds[v] = 1;
    out.is_port[v] = 1;
    uint64_t acc = 0;
    group.clear();
    for (node_t c = t.first_child(v); c != NO_NODE; c = t.next_sibling(c)) {
      group.push_back(c);
      acc += pend[c];
      if (acc >= m) {
        const uint32_t id = static_cast<uint32_t>(out.roots.size());
        assign_group(t, sheds, group, id, out.cluster_of, stack);
        out.roots.push_back(group);
        group.clear();
        acc = 0;
      }
    }
    if (!group.empty()) {
      const uint32_t id = static_cast<uint32_t>(out.roots.size());
      assign_group(t, sheds, group, id, out.cluster_of, stack);
      out.roots.push_back(group);
    }
  }

  // The root's pending tree is always a cluster of its own.
  group.assign(1, 0);
  const uint32_t id = static_cast<uint32_t>(out.roots.size());
  assign_group(t, sheds, group, id, out.cluster_of, stack);
  out.roots.push_back(group);
  return out;
}

std::vector<std::string> validate_clustering(const LabeledTree& t,
                                             const Clustering& c) {
  std::vector<std::string> bad;
  const size_t n = t.size();
  const uint64_t m = c.m;
  const uint64_t k = c.cluster_count();
  if (c.cluster_of.size() != n || c.is_port.size() != n) {
    bad.push_back("membership arrays have wrong length");
    return bad;
  }

  // Cluster count window: n/(2m) - 1 <= k <= 2n/m + 1.
  if (2 * m * (k + 1) < n) bad.push_back("too few clusters");
  if (m * k > 2 * n + m) bad.push_back("too many clusters");

  std::vector<uint64_t> size(k, 0);
  for (size_t v = 0; v < n; ++v) {
    if (c.cluster_of[v] >= k) {
      bad.push_back("node " + std::to_string(v) + " has invalid cluster id");
      return bad;
    }
    ++size[c.cluster_of[v]];
  }
  for (uint64_t id = 0; id < k; ++id) {
    if (size[id] == 0) bad.push_back("cluster " + std::to_string(id) + " is empty");
    if (size[id] > 2 * m - 1) {
      bad.push_back("cluster " + std::to_string(id) + " exceeds 2m-1 nodes");
    }
  }

  // Roots: consecutive siblings, outside parent cluster, covering the tree.
  std::vector<uint8_t> is_root_of_cluster(n, 0);
  for (uint64_t id = 0; id < k; ++id) {
    const auto& roots = c.roots[id];
    if (roots.empty()) {
      bad.push_back("cluster " + std::to_string(id) + " has no roots");
      continue;
    }
    for (size_t j = 0; j < roots.size(); ++j) {
      is_root_of_cluster[roots[j]] = 1;
      if (c.cluster_of[roots[j]] != id) {
        bad.push_back("cluster " + std::to_string(id) + " root not a member");
      }
      if (j > 0 && t.next_sibling(roots[j - 1]) != roots[j]) {
        bad.push_back("cluster " + std::to_string(id) +
                      " roots are not consecutive siblings");
      }
    }
    const node_t parent = t.parent(roots[0]);
    if (parent != NO_NODE && c.cluster_of[parent] == id) {
      bad.push_back("cluster " + std::to_string(id) +
                    " contains the parent of its roots");
    }
    if (parent == NO_NODE && roots[0] != 0) {
      bad.push_back("cluster " + std::to_string(id) + " has a broken root");
    }
  }

  for (size_t v = 0; v < n; ++v) {
    const node_t p = t.parent(v);
    if (!is_root_of_cluster[v]) {
      if (p == NO_NODE) {
        bad.push_back("tree root is not a cluster root");
      } else if (c.cluster_of[p] != c.cluster_of[v]) {
        bad.push_back("node " + std::to_string(v) +
                      " is detached from its cluster's roots");
      }
    }
    // Port dichotomy: children all inside or all outside.
    uint32_t inside = 0;
    for (node_t ch = t.first_child(v); ch != NO_NODE; ch = t.next_sibling(ch)) {
      if (c.cluster_of[ch] == c.cluster_of[v]) ++inside;
    }
    const uint32_t deg = t.degree(v);
    if (inside != 0 && inside != deg) {
      bad.push_back("node " + std::to_string(v) + " keeps only some children");
    }
    const bool port = deg > 0 && inside == 0;
    if (port != (c.is_port[v] != 0)) {
      bad.push_back("node " + std::to_string(v) + " has a wrong port flag");
    }
  }
  return bad;
}

}  // namespace ltsx
