#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltsx/bp_tree.hpp"
#include "ltsx/cluster_structure.hpp"
#include "ltsx/label_codec.hpp"
#include "ltsx/labeled_tree.hpp"
#include "ltsx/partial_sums.hpp"

namespace ltsx {

// Unary port-degree streams.  The first stream spells every cluster's degree
// entries as 0^d 1, concatenated in cluster order; the second, equally long
// stream marks the first bit of each cluster's region.
std::pair<BitVector, BitVector> encode_degree_streams(
    const std::vector<std::vector<uint32_t>>& entries);

// Size accounting for a built structure: bytes of each stored container
// section plus bits of every table rebuilt from them at load time.
struct SizeReport {
  uint64_t nodes = 0;
  uint64_t sigma = 0;
  uint64_t clusters = 0;
  uint64_t dict_entries = 0;
  uint64_t file_bytes = 0;
  std::vector<std::pair<std::string, uint64_t>> stored_bytes;  // per section
  std::vector<std::pair<std::string, uint64_t>> derived_bits;  // per structure
  uint64_t derived_total_bits = 0;
};

// Compressed labeled ordered tree with full navigation.
//
// The tree is cut into clusters of at most 2m-1 nodes; the cluster tree is
// kept as balanced parentheses, the per-cluster port degree sequences as two
// unary bitvectors, and the cluster contents as dictionary symbols encoded by
// an entropy coder with random access (either a single Huffman code or one
// code per ancestor context with periodic context samples).  Everything else
// navigation touches is rebuilt from those stored parts at load time.
//
// All query methods mirror NaiveOracle: same signatures, same results, same
// exceptions on misuse.
class SuccinctTree {
 public:
  struct Options {
    uint32_t k = 0;         // context length
    uint64_t m = 0;         // cluster parameter; 0 = pick from n and sigma
    bool boosted = false;   // per-context codes instead of a single code
    uint32_t d = 0;         // context sampling period; 0 = pick from n
    uint32_t sigma_small = 16;  // label-restricted ops kept while sigma <= this
  };

  SuccinctTree() = default;

  static uint64_t auto_m(uint64_t n, uint64_t sigma);
  static uint32_t auto_d(uint64_t n);

  static SuccinctTree build(const LabeledTree& t, const Options& opt);

  std::vector<uint8_t> serialize() const;
  static SuccinctTree load(const std::vector<uint8_t>& bytes);

  // Parameters and whole-tree accessors.
  size_t size() const { return static_cast<size_t>(n_); }
  size_t sigma() const { return alpha_.size(); }
  uint32_t k() const { return k_; }
  uint64_t m() const { return m_; }
  bool boosted() const { return boosted_; }
  uint32_t sampling_period() const { return d_; }
  uint32_t sigma_small() const { return sigma_small_; }
  size_t cluster_count() const { return K_; }
  size_t dict_size() const { return dict_.size(); }
  const Alphabet& alphabet() const { return alpha_; }
  bool has_label_ops() const { return label_ops_; }

  // Queries (preorder node ids, as in NaiveOracle).
  label_t label(node_t v) const;
  const std::string& label_token(node_t v) const;
  std::optional<node_t> parent(node_t v) const;
  std::optional<node_t> first_child(node_t v) const;
  std::optional<node_t> next_sibling(node_t v) const;
  uint32_t degree(node_t v) const;
  node_t child(node_t v, uint32_t i) const;  // 0-based; throws out_of_range
  uint32_t childrank(node_t v) const;        // 0-based; root -> 0
  uint32_t depth(node_t v) const;            // root -> 0
  std::optional<node_t> level_ancestor(node_t v, uint32_t i) const;
  node_t lca(node_t u, node_t v) const;
  node_t preorder_rank(node_t v) const;
  node_t preorder_select(node_t i) const;

  // Label-restricted queries; available while sigma <= sigma_small, otherwise
  // they throw std::logic_error.
  uint32_t childrank_label(node_t v, label_t a) const;
  std::optional<node_t> childselect_label(node_t v, uint32_t i, label_t a) const;
  uint32_t depth_label(node_t v, label_t a) const;
  std::optional<node_t> level_ancestor_label(node_t v, uint32_t i,
                                             label_t a) const;

  LabeledTree decode_full() const;

  SizeReport size_report() const;

  // Introspection used by tests and the size report.
  uint32_t symbol_at(size_t cluster) const;
  const std::vector<ClusterDescription>& dictionary() const { return dict_; }
  const BPTree& cluster_bp() const { return bp_; }
  const BitVector& degree_bits() const { return du_; }
  const BitVector& region_bits() const { return bu_; }
  const PlainLabelCodec& plain_codec() const;
  const BoostedLabelCodec& boosted_codec() const;

  // Original preorder id of the first member of a cluster, and the member
  // count; exposed for tests that pin the cluster layout.
  node_t cluster_first(size_t cluster) const;
  uint64_t cluster_size(size_t cluster) const;
  std::pair<uint32_t, uint32_t> locate(node_t v) const;  // (cluster, local idx)

 private:
  struct Stored;  // everything the container carries, pre-derivation
  void init(Stored&& s);
  void derive();  // rebuilds all redundant tables; validates as it goes

  // Cluster-tree geometry helpers (v is a cluster id in cluster-tree
  // preorder, g a global edge id, e a global entry id of the unary degree
  // stream).
  uint32_t sym(size_t v) const;
  const ClusterDescription& desc(size_t v) const { return dict_[sym(v)]; }
  size_t region_start(size_t v) const;
  size_t entry_first(size_t v) const;
  size_t entry_count(size_t v) const;
  uint64_t edges_before_entry(size_t e) const;
  uint32_t child_to_port_rank(size_t v, uint32_t childidx) const;
  uint32_t attach_port_local(size_t v) const;  // local record of v's attach port
  std::pair<uint64_t, uint64_t> port_edge_range(size_t v, uint32_t r) const;

  // Weighted cluster depth: sum of edge weights on the cluster-tree path down
  // to and including v's own edge.  wa_* are the per-label analogues.
  uint64_t wdepth(size_t v) const;
  uint64_t wdepth_label(size_t v, label_t a) const;

  node_t to_global(size_t v, uint32_t idx) const;
  std::pair<uint32_t, uint32_t> to_local(node_t g) const;
  uint32_t port_rank_below(size_t v, uint32_t idx) const;  // ports with local < idx
  uint64_t ext_prefix(size_t v, uint32_t r) const;  // sum of ext over first r ports

  uint64_t subtree_nodes(size_t v) const;  // original nodes under cluster v

  void require_label_ops() const;
  void check_node(node_t v) const;

  // --- stored ---
  Alphabet alpha_;
  uint32_t k_ = 0;
  uint64_t m_ = 1;
  bool boosted_ = false;
  uint32_t d_ = 1;
  uint32_t sigma_small_ = 16;
  uint64_t n_ = 0;
  BPTree bp_;
  BitVector du_;
  BitVector bu_;
  std::vector<ClusterDescription> dict_;
  PlainLabelCodec plain_;
  BoostedLabelCodec booster_;

  // --- derived ---
  size_t K_ = 0;
  std::vector<uint32_t> tp_parent_;      // cluster-tree parent (NO_NODE at root)
  std::vector<uint32_t> tp_childidx_;    // index within the parent's child list
  std::vector<uint32_t> tp_childstart_;  // per cluster: first global edge id
  std::vector<uint32_t> tp_child_;       // per global edge: child cluster
  std::vector<std::vector<uint32_t>> lift_;  // lift_[j][v]: 2^j-th ancestor
  BitVector marks_;                      // bit g set iff g starts a cluster
  PartialSums prefn_;                    // cluster sizes, preorder
  PartialSums trees_;                    // per edge: #trees of the child cluster
  PartialSums wpos_, wneg_;              // signed edge weights over BP positions
  std::vector<uint64_t> ext_cum_;        // per entry: ext sum of earlier entries
  std::vector<uint32_t> entry_local_;    // per entry: port's local record index
  bool label_ops_ = false;
  std::vector<PartialSums> lab_trees_;      // per label: a-labeled trees per edge
  std::vector<PartialSums> lab_wpos_, lab_wneg_;  // per label signed edge weights
};

}  // namespace ltsx
