#pragma once

#include <cstdint>
#include <vector>

#include "ltsx/clustering.hpp"
#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// One preorder record of a cluster description.  Ports are leaves of their
// cluster whose original children live in other clusters, so a port record
// carries no degree; a regular record carries the full original degree.
struct ClusterRecord {
  uint8_t is_port = 0;
  label_t label = 0;
  uint32_t deg = 0;  // meaningful only when is_port == 0
};

// Self-contained description of a cluster's content: the labels of the
// (at most k) nearest ancestors above the cluster with the nearest one last,
// plus the preorder records of its trees, left to right.  Two clusters with
// equal descriptions are interchangeable and share a dictionary symbol.
struct ClusterDescription {
  std::vector<label_t> context;
  std::vector<ClusterRecord> records;

  size_t node_count() const { return records.size(); }

  // Byte image used as the dictionary key and as the stored dictionary
  // entry: u32 context length, context labels, u32 record count, then per
  // record a flag byte, the label, and (regular only) the degree.  All
  // integers little endian.
  std::vector<uint8_t> canonical_bytes() const;
  static ClusterDescription from_canonical_bytes(const uint8_t* p, size_t len,
                                                 size_t& consumed);

  uint64_t fnv1a() const;  // display hash of the canonical bytes
};

// Local shape decoded from a description's records.
struct DecodedShape {
  std::vector<uint32_t> parent;      // record index, or UINT32_MAX for tree roots
  std::vector<uint32_t> roots;       // record indices of tree roots, left to right
  std::vector<uint32_t> ports;       // record indices of ports, preorder order
  std::vector<uint32_t> tree_depth;  // depth within the record's own tree
};

// Validates and replays the record stream; throws std::invalid_argument on a
// malformed description (dangling degree, trailing records, ...).
DecodedShape decode_shape(const ClusterDescription& d);

// Context of record i: the last `k` labels of the description context
// followed by the labels on the path from the record's tree root down to its
// parent (nearest ancestor last).
std::vector<label_t> record_context(const ClusterDescription& d,
                                    const DecodedShape& shape, uint32_t i,
                                    uint32_t k);

// The cluster tree: one node per cluster, numbered in its own preorder, which
// coincides with ascending first-root order of the clusters.  Everything a
// compressed representation stores or an analysis needs is laid out here in
// plain vectors.
struct ClusterStructure {
  uint32_t k = 0;   // context length used for descriptions
  uint64_t m = 0;   // grouping parameter of the clustering
  size_t count = 0;

  // Shape of the cluster tree, per preorder id.
  std::vector<uint32_t> parent;                 // NO_NODE for the root
  std::vector<std::vector<uint32_t>> children;  // ordered: by port, then left to right

  // Cluster-label string and dictionary: symbol[v] indexes dict, ids in
  // first-appearance order along the preorder.
  std::vector<uint32_t> symbol;
  std::vector<ClusterDescription> dict;

  // Original-tree view of each cluster.
  std::vector<std::vector<node_t>> roots;    // tree roots, left to right
  std::vector<std::vector<node_t>> members;  // local preorder = ascending id
  std::vector<std::vector<node_t>> ports;    // ports, leaf (= preorder) order
  std::vector<uint64_t> nsize;               // members.size()
  std::vector<uint64_t> subtree_t;           // original nodes below the cluster, inclusive
  std::vector<node_t> attach_port;           // port the cluster hangs from; NO_NODE at root
  std::vector<uint32_t> edge_weight;         // attach port's in-tree depth + 1; 0 at root

  // Port degree sequence: one count of attached child clusters per port, in
  // leaf order; clusters without ports get the single entry 0 so that every
  // node owns a nonempty region.
  std::vector<std::vector<uint32_t>> entries;

  // Original node -> (cluster, local index).
  std::vector<uint32_t> cluster_id;  // by original preorder id
  std::vector<uint32_t> local_idx;
};

ClusterStructure build_cluster_structure(const LabeledTree& t,
                                         const Clustering& c, uint32_t k);

// Rebuilds the original tree from the dictionary view: per-node symbols, the
// ordered child lists of the cluster tree, and the per-node port counts.
// Throws std::invalid_argument when the inputs are inconsistent.
LabeledTree reassemble_tree(const Alphabet& alpha,
                            const std::vector<ClusterDescription>& dict,
                            const std::vector<uint32_t>& symbol,
                            const std::vector<std::vector<uint32_t>>& children,
                            const std::vector<std::vector<uint32_t>>& port_counts);

}  // namespace ltsx
