#pragma once

#include <string>
#include <vector>

#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// Partition of the tree into small clusters, produced by cluster_greedy.
//
// Each cluster is a forest of pending subtrees whose roots are consecutive
// siblings in the input tree.  Every node is either *regular* in its cluster
// (all of its children belong to the same cluster) or a *port* (it has
// children, and every one of them lives in some other cluster; the node is a
// leaf of its own cluster).  Cluster ids follow emission order: groups are
// emitted while walking nodes bottom-up, and the cluster holding the input
// root is always emitted last.
struct Clustering {
  uint64_t m = 0;                          // grouping parameter used
  std::vector<uint32_t> cluster_of;        // node -> cluster id
  std::vector<std::vector<node_t>> roots;  // cluster id -> tree roots, left to right
  std::vector<uint8_t> is_port;            // node -> 1 iff port

  size_t cluster_count() const { return roots.size(); }
};

// Bottom-up greedy grouping with parameter m >= 1.  At each node the pending
// subtrees of its children are summed; if they hold fewer than m nodes they
// stay attached (the node's own pending tree), otherwise they are packed left
// to right into clusters that close as soon as they reach m nodes (the last
// group may stay smaller) and the node continues alone.  The root's pending
// tree becomes the final cluster.  Every cluster has at most 2m - 1 nodes.
Clustering cluster_greedy(const LabeledTree& t, uint64_t m);

// Structural invariants of a clustering; returns human-readable violations,
// empty when the clustering is valid:
//  - sizes: every cluster nonempty, at most 2m - 1 nodes,
//  - count: #clusters within [n/(2m) - 1, 2n/m + 1],
//  - shape: roots of a cluster are consecutive siblings; every non-root
//    member hangs below a root through same-cluster nodes,
//  - ports: every node keeps all of its children or none of them, matching
//    the is_port flags.
std::vector<std::string> validate_clustering(const LabeledTree& t,
                                             const Clustering& c);

}  // namespace ltsx
