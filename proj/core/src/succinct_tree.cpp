#include "ltsx/succinct_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>

#include "ltsx/container.hpp"

namespace ltsx {

namespace {

// End (exclusive) of record i's subtree within a decoded forest: records are
// in preorder, so the subtree runs while the tree depth stays greater.
uint32_t local_subtree_end(const DecodedShape& sh, uint32_t i) {
  uint32_t j = i + 1;
  const auto n = static_cast<uint32_t>(sh.parent.size());
  while (j < n && sh.tree_depth[j] > sh.tree_depth[i]) ++j;
  return j;
}

// Deepest common record of x and y, or nothing when they sit in different
// trees of the forest.
std::optional<uint32_t> local_lca(const DecodedShape& sh, uint32_t x,
                                  uint32_t y) {
  while (sh.tree_depth[x] > sh.tree_depth[y]) x = sh.parent[x];
  while (sh.tree_depth[y] > sh.tree_depth[x]) y = sh.parent[y];
  while (x != y) {
    if (sh.parent[x] == NO_NODE) return std::nullopt;
    x = sh.parent[x];
    y = sh.parent[y];
  }
  return x;
}

uint32_t port_rank_of_record(const DecodedShape& sh, uint32_t rec) {
  auto it = std::lower_bound(sh.ports.begin(), sh.ports.end(), rec);
  if (it == sh.ports.end() || *it != rec)
    throw std::logic_error("record is not a port of its cluster");
  return static_cast<uint32_t>(it - sh.ports.begin());
}

void write_huffman(ByteWriter& w, const Huffman& h) {
  w.u32(static_cast<uint32_t>(h.symbols()));
  w.raw(h.lengths().data(), h.lengths().size());
}

Huffman read_huffman(ByteReader& r) {
  uint32_t n = r.u32();
  const uint8_t* p = r.raw(n);
  return Huffman::from_lengths(std::vector<uint8_t>(p, p + n));
}

}  // namespace

std::pair<BitVector, BitVector> encode_degree_streams(
    const std::vector<std::vector<uint32_t>>& entries) {
  BitBuffer du, bu;
  for (const auto& region : entries) {
    size_t begin = du.size();
    for (uint32_t deg : region) {
      for (uint32_t j = 0; j < deg; ++j) du.push_bit(0);
      du.push_bit(1);
    }
    while (bu.size() < du.size()) bu.push_bit(bu.size() == begin);
  }
  return {BitVector(du), BitVector(bu)};
}

struct SuccinctTree::Stored {
  Alphabet alpha;
  uint32_t k = 0;
  uint64_t m = 1;
  bool boosted = false;
  uint32_t d = 1;
  uint32_t sigma_small = 16;
  uint64_t n = 0;
  uint64_t clusters = 0;
  BPTree bp;
  BitVector du;
  BitVector bu;
  std::vector<ClusterDescription> dict;
  PlainLabelCodec plain;
  BoostedLabelCodec booster;
};

uint64_t SuccinctTree::auto_m(uint64_t n, uint64_t sigma) {
  if (n == 0) return 1;
  if (sigma < 2) return n;  // unlabeled content: one cluster is optimal
  long double v = std::log2(static_cast<long double>(n)) /
                  (8.0L * std::log2(static_cast<long double>(sigma)));
  if (v < 1.0L) return 1;
  return static_cast<uint64_t>(v);
}

uint32_t SuccinctTree::auto_d(uint64_t n) {
  if (n < 2) return 1;
  long double lg = std::log2(static_cast<long double>(n));
  long double lglg = std::log2(lg);
  if (lglg < 1.0L) lglg = 1.0L;  // keep the period finite for tiny trees
  long double v = std::ceil(lg / lglg);
  return v < 1.0L ? 1u : static_cast<uint32_t>(v);
}

SuccinctTree SuccinctTree::build(const LabeledTree& t, const Options& opt) {
  if (t.size() == 0) throw std::invalid_argument("cannot compress an empty tree");
  Stored s;
  s.alpha = t.alphabet();
  s.k = opt.k;
  s.m = opt.m == 0 ? auto_m(t.size(), t.sigma()) : opt.m;
  s.boosted = opt.boosted;
  s.d = opt.d == 0 ? auto_d(t.size()) : opt.d;
  s.sigma_small = opt.sigma_small;
  s.n = t.size();

  Clustering c = cluster_greedy(t, s.m);
  ClusterStructure cs = build_cluster_structure(t, c, s.k);
  s.clusters = cs.count;

  {  // cluster-tree parentheses, preorder
    BitBuffer bp;
    std::vector<std::pair<uint32_t, size_t>> st;
    bp.push_bit(1);
    st.emplace_back(0, 0);
    while (!st.empty()) {
      auto& top = st.back();
      if (top.second < cs.children[top.first].size()) {
        uint32_t ch = cs.children[top.first][top.second++];
        bp.push_bit(1);
        st.emplace_back(ch, 0);
      } else {
        bp.push_bit(0);
        st.pop_back();
      }
    }
    s.bp = BPTree::from_bits(BitVector(bp));
  }

  std::tie(s.du, s.bu) = encode_degree_streams(cs.entries);

  if (s.boosted) {
    std::vector<std::vector<label_t>> ctxs(cs.count);
    for (size_t v = 0; v < cs.count; ++v)
      ctxs[v] = cs.dict[cs.symbol[v]].context;
    std::vector<uint32_t> tdep(cs.count, 0);
    for (size_t v = 1; v < cs.count; ++v) tdep[v] = tdep[cs.parent[v]] + 1;
    s.booster = BoostedLabelCodec::build(cs.symbol, cs.dict.size(), s.k,
                                         t.sigma(), ctxs, tdep, s.d);
  } else {
    s.plain = PlainLabelCodec::build(cs.symbol, cs.dict.size());
  }
  s.dict = std::move(cs.dict);

  SuccinctTree out;
  out.init(std::move(s));
  return out;
}

void SuccinctTree::init(Stored&& s) {
  alpha_ = std::move(s.alpha);
  k_ = s.k;
  m_ = s.m;
  boosted_ = s.boosted;
  d_ = s.d;
  sigma_small_ = s.sigma_small;
  n_ = s.n;
  bp_ = std::move(s.bp);
  du_ = std::move(s.du);
  bu_ = std::move(s.bu);
  dict_ = std::move(s.dict);
  plain_ = std::move(s.plain);
  booster_ = std::move(s.booster);
  if (bp_.node_count() != s.clusters)
    throw std::runtime_error("cluster count disagrees with the parentheses");
  derive();
}

void SuccinctTree::derive() {
  K_ = bp_.node_count();
  if (K_ == 0) throw std::runtime_error("empty cluster tree");
  if (n_ == 0) throw std::runtime_error("empty node count");
  const BitVector& bits = bp_.bits();

  // Cluster-tree shape, straight off the parentheses.
  tp_parent_.assign(K_, NO_NODE);
  tp_childidx_.assign(K_, 0);
  std::vector<uint32_t> deg(K_, 0);
  {
    std::vector<uint32_t> st;
    uint32_t next = 0;
    for (size_t p = 0; p < bits.size(); ++p) {
      if (bits.get(p)) {
        uint32_t id = next++;
        if (!st.empty()) {
          tp_parent_[id] = st.back();
          tp_childidx_[id] = deg[st.back()]++;
        }
        st.push_back(id);
      } else {
        st.pop_back();
      }
    }
  }
  tp_childstart_.assign(K_ + 1, 0);
  for (size_t v = 0; v < K_; ++v)
    tp_childstart_[v + 1] = tp_childstart_[v] + deg[v];
  tp_child_.assign(K_ - 1, 0);
  for (size_t v = 1; v < K_; ++v)
    tp_child_[tp_childstart_[tp_parent_[v]] + tp_childidx_[v]] =
        static_cast<uint32_t>(v);

  // Degree-stream sanity: one region per cluster, one zero per edge.
  if (du_.size() != bu_.size())
    throw std::runtime_error("degree and region streams disagree in length");
  if (bu_.ones() != K_)
    throw std::runtime_error("region count disagrees with the cluster tree");
  if (du_.zeros() != K_ - 1)
    throw std::runtime_error("degree stream disagrees with the edge count");
  if (du_.size() == 0 || !bu_.get(0))
    throw std::runtime_error("degree stream must start a region");
  const size_t entries = du_.ones();

  // Ancestor lifting over the cluster tree (root lifts to itself).
  {
    uint32_t levels = 1;
    while ((1ull << levels) < K_) ++levels;
    lift_.assign(levels, std::vector<uint32_t>(K_));
    for (size_t v = 0; v < K_; ++v)
      lift_[0][v] = tp_parent_[v] == NO_NODE ? 0u : tp_parent_[v];
    for (uint32_t j = 1; j < levels; ++j)
      for (size_t v = 0; v < K_; ++v)
        lift_[j][v] = lift_[j - 1][lift_[j - 1][v]];
  }

  // One decoding pass in preorder: cluster symbols, shapes, ancestor paths.
  // When the codec is context-boosted this is also the class rebuild, with
  // every stored context sample cross-checked against the derived context.
  std::vector<uint32_t> syms(K_);
  std::vector<DecodedShape> shapes(K_);
  std::vector<std::vector<label_t>> pathlab(K_);  // labels root..attach port
  {
    std::vector<std::vector<label_t>> ctx(K_);
    if (boosted_) {
      if (booster_.size() != K_)
        throw std::runtime_error("codec length disagrees with the cluster tree");
      booster_.begin_class_rebuild();
    } else {
      if (plain_.size() != K_)
        throw std::runtime_error("codec length disagrees with the cluster tree");
    }
    for (size_t v = 0; v < K_; ++v) {
      if (v > 0) {
        size_t p = tp_parent_[v];
        uint32_t r = child_to_port_rank(p, tp_childidx_[v]);
        if (r >= shapes[p].ports.size())
          throw std::runtime_error("edge attaches to a missing port");
        uint32_t prec = shapes[p].ports[r];
        const auto& rec = dict_[syms[p]].records;
        std::vector<label_t> path;
        for (uint32_t x = prec;; x = shapes[p].parent[x]) {
          path.push_back(rec[x].label);
          if (shapes[p].parent[x] == NO_NODE) break;
        }
        std::reverse(path.begin(), path.end());
        std::vector<label_t> cx = ctx[p];
        cx.insert(cx.end(), path.begin(), path.end());
        if (cx.size() > k_) cx.erase(cx.begin(), cx.end() - k_);
        ctx[v] = std::move(cx);
        pathlab[v] = std::move(path);
      }
      if (boosted_) {
        if (booster_.sampled(v) && booster_.sampled_context(v) != ctx[v])
          throw std::runtime_error("stored context sample disagrees");
        booster_.assign_class(v, ctx[v]);
        syms[v] = booster_.at(v);
      } else {
        syms[v] = plain_.at(v);
      }
      if (syms[v] >= dict_.size())
        throw std::runtime_error("cluster symbol outside the dictionary");
      if (dict_[syms[v]].context != ctx[v])
        throw std::runtime_error("description context disagrees");
      shapes[v] = decode_shape(dict_[syms[v]]);
    }
    if (boosted_) booster_.end_class_rebuild();
  }
  if (shapes[0].roots.size() != 1)
    throw std::runtime_error("root cluster must hold a single tree");

  // Member counts and their prefix sums.
  std::vector<uint64_t> nsz(K_);
  for (size_t v = 0; v < K_; ++v) nsz[v] = dict_[syms[v]].records.size();
  prefn_ = PartialSums(nsz);
  if (prefn_.prefix(K_) != n_)
    throw std::runtime_error("member counts disagree with the node count");

  // Entry table: the port record behind every unary entry.
  entry_local_.assign(entries, 0);
  for (size_t v = 0; v < K_; ++v) {
    size_t es = entry_first(v);
    size_t cnt = entry_count(v);
    const auto& ports = shapes[v].ports;
    if (ports.empty()) {
      if (cnt != 1 || edges_before_entry(es + 1) != edges_before_entry(es))
        throw std::runtime_error("portless cluster must own one empty entry");
    } else {
      if (cnt != ports.size())
        throw std::runtime_error("entry count disagrees with the ports");
      for (size_t r = 0; r < cnt; ++r) {
        if (edges_before_entry(es + r + 1) == edges_before_entry(es + r))
          throw std::runtime_error("port without attached clusters");
        entry_local_[es + r] = ports[r];
      }
    }
  }

  // Per-edge tree counts and per-cluster edge weights.
  const size_t edges = K_ - 1;
  {
    std::vector<uint64_t> tr(edges);
    for (size_t g = 0; g < edges; ++g)
      tr[g] = shapes[tp_child_[g]].roots.size();
    trees_ = PartialSums(tr);
  }
  std::vector<uint64_t> w(K_, 0);
  for (size_t v = 1; v < K_; ++v) {
    size_t p = tp_parent_[v];
    uint32_t prec =
        entry_local_[entry_first(p) + child_to_port_rank(p, tp_childidx_[v])];
    w[v] = shapes[p].tree_depth[prec] + 1;
    if (w[v] != pathlab[v].size())
      throw std::runtime_error("edge weight disagrees with the port depth");
  }
  std::vector<uint32_t> pos_node(2 * K_);
  {
    std::vector<uint32_t> st;
    uint32_t next = 0;
    for (size_t p = 0; p < bits.size(); ++p) {
      if (bits.get(p)) {
        pos_node[p] = next;
        st.push_back(next++);
      } else {
        pos_node[p] = st.back();
        st.pop_back();
      }
    }
  }
  {
    std::vector<uint64_t> wp(2 * K_, 0), wn(2 * K_, 0);
    for (size_t p = 0; p < 2 * K_; ++p)
      (bits.get(p) ? wp : wn)[p] = w[pos_node[p]];
    wpos_ = PartialSums(wp);
    wneg_ = PartialSums(wn);
  }

  // Label-restricted companions while the alphabet is small.
  label_ops_ = alpha_.size() <= sigma_small_;
  lab_trees_.clear();
  lab_wpos_.clear();
  lab_wneg_.clear();
  if (label_ops_) {
    size_t sg = alpha_.size();
    lab_trees_.resize(sg);
    lab_wpos_.resize(sg);
    lab_wneg_.resize(sg);
    for (label_t a = 0; a < sg; ++a) {
      std::vector<uint64_t> ta(edges, 0);
      for (size_t g = 0; g < edges; ++g) {
        size_t x = tp_child_[g];
        const auto& rec = dict_[syms[x]].records;
        for (uint32_t root : shapes[x].roots)
          if (rec[root].label == a) ++ta[g];
      }
      lab_trees_[a] = PartialSums(ta);
      std::vector<uint64_t> wa(K_, 0);
      for (size_t v = 1; v < K_; ++v)
        wa[v] = static_cast<uint64_t>(
            std::count(pathlab[v].begin(), pathlab[v].end(), a));
      std::vector<uint64_t> wp(2 * K_, 0), wn(2 * K_, 0);
      for (size_t p = 0; p < 2 * K_; ++p)
        (bits.get(p) ? wp : wn)[p] = wa[pos_node[p]];
      lab_wpos_[a] = PartialSums(wp);
      lab_wneg_[a] = PartialSums(wn);
    }
  }

  // Subtree node counts, external gaps per entry, first members, marks.
  std::vector<uint64_t> stv(nsz);
  for (size_t v = K_ - 1; v >= 1; --v) stv[tp_parent_[v]] += stv[v];
  std::vector<uint64_t> edge_pref(edges + 1, 0);
  for (size_t g = 0; g < edges; ++g)
    edge_pref[g + 1] = edge_pref[g] + stv[tp_child_[g]];
  ext_cum_.assign(entries + 1, 0);
  for (size_t e = 0; e < entries; ++e) {
    uint64_t lo = edges_before_entry(e), hi = edges_before_entry(e + 1);
    ext_cum_[e + 1] = ext_cum_[e] + (edge_pref[hi] - edge_pref[lo]);
  }
  {
    std::vector<uint64_t> pre1(K_, 0);
    for (size_t v = 1; v < K_; ++v) {
      size_t p = tp_parent_[v];
      size_t es = entry_first(p);
      uint32_t r = child_to_port_rank(p, tp_childidx_[v]);
      uint32_t prec = entry_local_[es + r];
      uint64_t portg = pre1[p] + prec + (ext_cum_[es + r] - ext_cum_[es]);
      uint64_t g = tp_childstart_[p] + tp_childidx_[v];
      uint64_t lo = edges_before_entry(es + r);
      pre1[v] = portg + 1 + (edge_pref[g] - edge_pref[lo]);
      if (pre1[v] <= pre1[v - 1] || pre1[v] >= n_)
        throw std::runtime_error("cluster layout is not in preorder");
    }
    BitBuffer mk;
    size_t bit = 0;
    for (size_t v = 0; v < K_; ++v) {
      while (bit < pre1[v]) {
        mk.push_bit(0);
        ++bit;
      }
      mk.push_bit(1);
      ++bit;
    }
    while (bit < n_) {
      mk.push_bit(0);
      ++bit;
    }
    marks_ = BitVector(mk);
  }
}

// --- geometry helpers -------------------------------------------------------

uint32_t SuccinctTree::sym(size_t v) const {
  return boosted_ ? booster_.at(v) : plain_.at(v);
}

size_t SuccinctTree::region_start(size_t v) const {
  return bu_.select1(v + 1);
}

size_t SuccinctTree::entry_first(size_t v) const {
  return du_.rank1(region_start(v));
}

size_t SuccinctTree::entry_count(size_t v) const {
  size_t end = v + 1 < K_ ? du_.rank1(region_start(v + 1)) : du_.ones();
  return end - entry_first(v);
}

uint64_t SuccinctTree::edges_before_entry(size_t e) const {
  if (e == 0) return 0;
  return du_.select1(e) + 1 - e;
}

uint32_t SuccinctTree::child_to_port_rank(size_t v, uint32_t childidx) const {
  uint64_t g = tp_childstart_[v] + childidx;
  size_t z = du_.select0(g + 1);
  return static_cast<uint32_t>(du_.rank1(z) - entry_first(v));
}

uint32_t SuccinctTree::attach_port_local(size_t v) const {
  size_t p = tp_parent_[v];
  return entry_local_[entry_first(p) + child_to_port_rank(p, tp_childidx_[v])];
}

std::pair<uint64_t, uint64_t> SuccinctTree::port_edge_range(size_t v,
                                                            uint32_t r) const {
  size_t e = entry_first(v) + r;
  return {edges_before_entry(e), edges_before_entry(e + 1)};
}

uint64_t SuccinctTree::wdepth(size_t v) const {
  size_t p = bp_.pos(v);
  return wpos_.prefix(p + 1) - wneg_.prefix(p + 1);
}

uint64_t SuccinctTree::wdepth_label(size_t v, label_t a) const {
  size_t p = bp_.pos(v);
  return lab_wpos_[a].prefix(p + 1) - lab_wneg_[a].prefix(p + 1);
}

uint32_t SuccinctTree::port_rank_below(size_t v, uint32_t idx) const {
  // entry_local_ is ascending within a region (ports are in preorder); the
  // placeholder entry of a portless cluster sits at local 0 with a zero gap,
  // so counting it never changes a sum.
  size_t es = entry_first(v);
  size_t lo = es, hi = es + entry_count(v);
  while (lo < hi) {
    size_t mid = lo + (hi - lo) / 2;
    if (entry_local_[mid] < idx)
      lo = mid + 1;
    else
      hi = mid;
  }
  return static_cast<uint32_t>(lo - es);
}

uint64_t SuccinctTree::ext_prefix(size_t v, uint32_t r) const {
  size_t es = entry_first(v);
  return ext_cum_[es + r] - ext_cum_[es];
}

node_t SuccinctTree::to_global(size_t v, uint32_t idx) const {
  return static_cast<node_t>(marks_.select1(v + 1) + idx +
                             ext_prefix(v, port_rank_below(v, idx)));
}

uint64_t SuccinctTree::subtree_nodes(size_t v) const {
  return prefn_.sum(v + 1, v + bp_.subtree_count(v));
}

std::pair<uint32_t, uint32_t> SuccinctTree::to_local(node_t g) const {
  size_t c = marks_.rank1(static_cast<size_t>(g) + 1) - 1;
  auto span_end = [&](size_t v) {
    return marks_.select1(v + 1) + subtree_nodes(v) - 1;
  };
  size_t a = c;
  if (span_end(a) < g) {
    size_t x = c;  // invariant: span_end(x) < g; the root always satisfies g
    for (size_t j = lift_.size(); j-- > 0;) {
      size_t y = lift_[j][x];
      if (span_end(y) < g) x = y;
    }
    a = tp_parent_[x];
  }
  uint64_t target = g - marks_.select1(a + 1);
  uint32_t lo = 0, hi = static_cast<uint32_t>(prefn_.value(a + 1)) - 1;
  while (lo < hi) {  // largest idx with idx + gaps-before(idx) <= target
    uint32_t mid = lo + (hi - lo + 1) / 2;
    uint64_t f = mid + ext_prefix(a, port_rank_below(a, mid));
    if (f <= target)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (lo + ext_prefix(a, port_rank_below(a, lo)) != target)
    throw std::runtime_error("node does not map into its cluster");
  return {static_cast<uint32_t>(a), lo};
}

void SuccinctTree::require_label_ops() const {
  if (!label_ops_)
    throw std::logic_error(
        "label-restricted operations were dropped for this alphabet size");
}

void SuccinctTree::check_node(node_t v) const {
  if (v >= n_) throw std::out_of_range("node id out of range");
}

// --- queries ----------------------------------------------------------------

label_t SuccinctTree::label(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  return desc(c).records[i].label;
}

const std::string& SuccinctTree::label_token(node_t v) const {
  return alpha_.token(label(v));
}

std::optional<node_t> SuccinctTree::parent(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  DecodedShape sh = decode_shape(desc(c));
  if (sh.parent[i] != NO_NODE) return to_global(c, sh.parent[i]);
  if (c == 0) return std::nullopt;
  return to_global(tp_parent_[c], attach_port_local(c));
}

std::optional<node_t> SuccinctTree::first_child(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  const auto& rec = desc(c).records;
  if (!rec[i].is_port) {
    if (rec[i].deg == 0) return std::nullopt;
    return to_global(c, i + 1);
  }
  DecodedShape sh = decode_shape(desc(c));
  uint32_t r = port_rank_of_record(sh, i);
  auto [lo, hi] = port_edge_range(c, r);
  (void)hi;
  return to_global(tp_child_[lo], 0);
}

std::optional<node_t> SuccinctTree::next_sibling(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  DecodedShape sh = decode_shape(desc(c));
  uint32_t j = local_subtree_end(sh, i);
  if (j < sh.parent.size() && sh.parent[j] == sh.parent[i])
    return to_global(c, j);
  if (sh.parent[i] != NO_NODE) return std::nullopt;
  if (c == 0) return std::nullopt;
  size_t p = tp_parent_[c];
  uint32_t ci = tp_childidx_[c];
  auto [lo, hi] = port_edge_range(p, child_to_port_rank(p, ci));
  (void)lo;
  uint64_t g = tp_childstart_[p] + ci;
  if (g + 1 < hi) return to_global(tp_child_[g + 1], 0);
  return std::nullopt;
}

uint32_t SuccinctTree::degree(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  const auto& rec = desc(c).records;
  if (!rec[i].is_port) return rec[i].deg;
  DecodedShape sh = decode_shape(desc(c));
  auto [lo, hi] = port_edge_range(c, port_rank_of_record(sh, i));
  return static_cast<uint32_t>(trees_.prefix(hi) - trees_.prefix(lo));
}

node_t SuccinctTree::child(node_t v, uint32_t i) const {
  check_node(v);
  auto [c, j] = to_local(v);
  const auto& rec = desc(c).records;
  DecodedShape sh = decode_shape(desc(c));
  if (!rec[j].is_port) {
    if (i >= rec[j].deg) throw std::out_of_range("child index out of range");
    uint32_t seen = 0;
    for (uint32_t x = j + 1;
         x < sh.parent.size() && sh.parent[x] == j;
         x = local_subtree_end(sh, x)) {
      if (seen == i) return to_global(c, x);
      ++seen;
    }
    throw std::logic_error("local child walk exhausted the cluster");
  }
  auto [lo, hi] = port_edge_range(c, port_rank_of_record(sh, j));
  uint64_t total = trees_.prefix(hi) - trees_.prefix(lo);
  if (i >= total) throw std::out_of_range("child index out of range");
  uint64_t t = trees_.prefix(lo) + i + 1;
  size_t e = trees_.find(t);
  uint32_t ri = static_cast<uint32_t>(t - trees_.prefix(e - 1) - 1);
  size_t x = tp_child_[e - 1];
  DecodedShape shx = decode_shape(desc(x));
  return to_global(x, shx.roots[ri]);
}

uint32_t SuccinctTree::childrank(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  DecodedShape sh = decode_shape(desc(c));
  if (sh.parent[i] != NO_NODE) {
    uint32_t rank = 0;
    for (uint32_t x = sh.parent[i] + 1; x < i; x = local_subtree_end(sh, x))
      ++rank;
    return rank;
  }
  if (c == 0) return 0;
  size_t p = tp_parent_[c];
  uint32_t ci = tp_childidx_[c];
  auto [lo, hi] = port_edge_range(p, child_to_port_rank(p, ci));
  (void)hi;
  uint64_t g = tp_childstart_[p] + ci;
  uint64_t before = trees_.prefix(g) - trees_.prefix(lo);
  auto it = std::lower_bound(sh.roots.begin(), sh.roots.end(), i);
  return static_cast<uint32_t>(before + (it - sh.roots.begin()));
}

uint32_t SuccinctTree::depth(node_t v) const {
  check_node(v);
  auto [c, i] = to_local(v);
  DecodedShape sh = decode_shape(desc(c));
  return static_cast<uint32_t>(wdepth(c) + sh.tree_depth[i]);
}

std::optional<node_t> SuccinctTree::level_ancestor(node_t v, uint32_t i) const {
  check_node(v);
  if (i == 0) return v;
  auto [c, loc] = to_local(v);
  DecodedShape sh = decode_shape(desc(c));
  if (i <= sh.tree_depth[loc]) {
    uint32_t x = loc;
    for (uint32_t s = 0; s < i; ++s) x = sh.parent[x];
    return to_global(c, x);
  }
  uint64_t dv = wdepth(c) + sh.tree_depth[loc];
  if (i > dv) return std::nullopt;
  uint64_t target = dv - i;
  size_t x = c;  // invariant: wdepth(x) > target
  for (size_t j = lift_.size(); j-- > 0;) {
    size_t y = lift_[j][x];
    if (wdepth(y) > target) x = y;
  }
  size_t a = tp_parent_[x];
  uint32_t rec = attach_port_local(x);
  DecodedShape sha = decode_shape(desc(a));
  for (uint64_t up = wdepth(x) - 1 - target; up > 0; --up)
    rec = sha.parent[rec];
  return to_global(a, rec);
}

node_t SuccinctTree::lca(node_t u, node_t v) const {
  check_node(u);
  check_node(v);
  if (u == v) return u;
  auto [cu, iu] = to_local(u);
  auto [cv, iv] = to_local(v);
  if (cu == cv) {
    DecodedShape sh = decode_shape(desc(cu));
    if (auto l = local_lca(sh, iu, iv)) return to_global(cu, *l);
    return to_global(tp_parent_[cu], attach_port_local(cu));
  }
  size_t l = bp_.lca(static_cast<node_t>(cu), static_cast<node_t>(cv));
  auto entry_record = [&](size_t cx, uint32_t ix) -> uint32_t {
    if (cx == l) return ix;
    // ancestor of cx one step below l, then its attach port inside l
    uint32_t dl = bp_.depth(static_cast<node_t>(l));
    size_t x = cx;
    uint32_t dx = bp_.depth(static_cast<node_t>(cx));
    for (size_t j = lift_.size(); j-- > 0;) {
      uint32_t step = static_cast<uint32_t>(1u << j);
      if (dx >= step && dx - step > dl) {
        x = lift_[j][x];
        dx -= step;
      }
    }
    return attach_port_local(x);
  };
  uint32_t ru = entry_record(cu, iu);
  uint32_t rv = entry_record(cv, iv);
  if (ru == rv) return to_global(l, ru);
  DecodedShape shl = decode_shape(desc(l));
  if (auto w = local_lca(shl, ru, rv)) return to_global(l, *w);
  if (l == 0) throw std::logic_error("disconnected paths at the root cluster");
  return to_global(tp_parent_[l], attach_port_local(l));
}

node_t SuccinctTree::preorder_rank(node_t v) const {
  check_node(v);
  return v;
}

node_t SuccinctTree::preorder_select(node_t i) const {
  check_node(i);
  return i;
}

uint32_t SuccinctTree::childrank_label(node_t v, label_t a) const {
  require_label_ops();
  check_node(v);
  if (a >= alpha_.size()) return 0;
  auto [c, i] = to_local(v);
  const auto& rec = desc(c).records;
  DecodedShape sh = decode_shape(desc(c));
  if (sh.parent[i] != NO_NODE) {
    uint32_t cnt = 0;
    for (uint32_t x = sh.parent[i] + 1; x < i; x = local_subtree_end(sh, x))
      if (rec[x].label == a) ++cnt;
    return cnt;
  }
  if (c == 0) return 0;
  size_t p = tp_parent_[c];
  uint32_t ci = tp_childidx_[c];
  auto [lo, hi] = port_edge_range(p, child_to_port_rank(p, ci));
  (void)hi;
  uint64_t g = tp_childstart_[p] + ci;
  uint64_t before = lab_trees_[a].prefix(g) - lab_trees_[a].prefix(lo);
  uint32_t own = 0;
  for (uint32_t root : sh.roots) {
    if (root >= i) break;
    if (rec[root].label == a) ++own;
  }
  return static_cast<uint32_t>(before + own);
}

std::optional<node_t> SuccinctTree::childselect_label(node_t v, uint32_t i,
                                                      label_t a) const {
  require_label_ops();
  check_node(v);
  if (i == 0) throw std::invalid_argument("childselect_label is 1-based");
  if (a >= alpha_.size()) return std::nullopt;
  auto [c, j] = to_local(v);
  const auto& rec = desc(c).records;
  DecodedShape sh = decode_shape(desc(c));
  if (!rec[j].is_port) {
    uint32_t seen = 0;
    for (uint32_t x = j + 1;
         x < sh.parent.size() && sh.parent[x] == j;
         x = local_subtree_end(sh, x))
      if (rec[x].label == a && ++seen == i) return to_global(c, x);
    return std::nullopt;
  }
  auto [lo, hi] = port_edge_range(c, port_rank_of_record(sh, j));
  uint64_t base = lab_trees_[a].prefix(lo);
  if (i > lab_trees_[a].prefix(hi) - base) return std::nullopt;
  size_t e = lab_trees_[a].find(base + i);
  uint64_t nth = base + i - lab_trees_[a].prefix(e - 1);  // 1-based in cluster
  size_t x = tp_child_[e - 1];
  const auto& recx = desc(x).records;
  DecodedShape shx = decode_shape(desc(x));
  for (uint32_t root : shx.roots)
    if (recx[root].label == a && --nth == 0) return to_global(x, root);
  throw std::logic_error("per-label tree counts disagree with the records");
}

uint32_t SuccinctTree::depth_label(node_t v, label_t a) const {
  require_label_ops();
  check_node(v);
  if (a >= alpha_.size()) return 0;
  auto [c, i] = to_local(v);
  const auto& rec = desc(c).records;
  DecodedShape sh = decode_shape(desc(c));
  uint32_t own = 0;
  for (uint32_t x = sh.parent[i]; x != NO_NODE; x = sh.parent[x])
    if (rec[x].label == a) ++own;
  return static_cast<uint32_t>(wdepth_label(c, a) + own);
}

std::optional<node_t> SuccinctTree::level_ancestor_label(node_t v, uint32_t i,
                                                         label_t a) const {
  require_label_ops();
  check_node(v);
  if (i == 0) throw std::invalid_argument("level_ancestor_label is 1-based");
  if (a >= alpha_.size()) return std::nullopt;
  auto [c, loc] = to_local(v);
  const auto& rec = desc(c).records;
  DecodedShape sh = decode_shape(desc(c));
  uint32_t seen = 0;
  for (uint32_t x = sh.parent[loc]; x != NO_NODE; x = sh.parent[x])
    if (rec[x].label == a && ++seen == i) return to_global(c, x);
  uint64_t wa = wdepth_label(c, a);
  uint64_t rem = i - seen;
  if (rem > wa) return std::nullopt;
  uint64_t target = wa - rem;  // the answer's own count of a-labeled ancestors
  size_t x = c;                // invariant: wdepth_label(x, a) > target
  for (size_t j = lift_.size(); j-- > 0;) {
    size_t y = lift_[j][x];
    if (wdepth_label(y, a) > target) x = y;
  }
  size_t aa = tp_parent_[x];
  uint32_t prec = attach_port_local(x);
  const auto& reca = desc(aa).records;
  DecodedShape sha = decode_shape(desc(aa));
  std::vector<uint32_t> path;
  for (uint32_t r = prec;; r = sha.parent[r]) {
    path.push_back(r);
    if (sha.parent[r] == NO_NODE) break;
  }
  std::reverse(path.begin(), path.end());
  uint64_t above = wdepth_label(aa, a);
  for (uint32_t r : path) {
    if (reca[r].label == a) {
      if (above == target) return to_global(aa, r);
      ++above;
    }
  }
  throw std::logic_error("per-label ancestor walk exhausted the cluster");
}

LabeledTree SuccinctTree::decode_full() const {
  std::vector<uint32_t> symbols(K_);
  for (size_t v = 0; v < K_; ++v) symbols[v] = sym(v);
  std::vector<std::vector<uint32_t>> children(K_);
  for (size_t v = 0; v < K_; ++v)
    children[v].assign(tp_child_.begin() + tp_childstart_[v],
                       tp_child_.begin() + tp_childstart_[v + 1]);
  std::vector<std::vector<uint32_t>> counts(K_);
  for (size_t v = 0; v < K_; ++v) {
    size_t es = entry_first(v), cnt = entry_count(v);
    counts[v].reserve(cnt);
    for (size_t e = es; e < es + cnt; ++e)
      counts[v].push_back(static_cast<uint32_t>(edges_before_entry(e + 1) -
                                                edges_before_entry(e)));
  }
  return reassemble_tree(alpha_, dict_, symbols, children, counts);
}

// --- container --------------------------------------------------------------

namespace {
constexpr const char* kHead = "HEAD";
constexpr const char* kAlph = "ALPH";
constexpr const char* kDict = "DICT";
constexpr const char* kBp = "BP  ";
constexpr const char* kDu = "DU  ";
constexpr const char* kBu = "BU  ";
constexpr const char* kPHuf = "PHUF";
constexpr const char* kPPay = "PPAY";
constexpr const char* kPBnd = "PBND";
constexpr const char* kBHuf = "BHUF";
constexpr const char* kBPay = "BPAY";
constexpr const char* kBBnd = "BBND";
constexpr const char* kMark = "MARK";
constexpr const char* kSamp = "SAMP";
}  // namespace

std::vector<uint8_t> SuccinctTree::serialize() const {
  ContainerWriter w;
  {
    ByteWriter b;
    b.u32(k_);
    b.u64(m_);
    b.u8(boosted_ ? 1 : 0);
    b.u32(d_);
    b.u32(sigma_small_);
    b.u64(n_);
    b.u64(K_);
    w.add(kHead, b.take());
  }
  {
    ByteWriter b;
    b.u32(static_cast<uint32_t>(alpha_.size()));
    for (const std::string& tok : alpha_.tokens()) {
      b.u32(static_cast<uint32_t>(tok.size()));
      b.raw(reinterpret_cast<const uint8_t*>(tok.data()), tok.size());
    }
    w.add(kAlph, b.take());
  }
  {
    ByteWriter b;
    b.u32(static_cast<uint32_t>(dict_.size()));
    for (const ClusterDescription& d : dict_) {
      std::vector<uint8_t> img = d.canonical_bytes();
      b.raw(img.data(), img.size());
    }
    w.add(kDict, b.take());
  }
  {
    ByteWriter b;
    b.bitvector(bp_.bits());
    w.add(kBp, b.take());
  }
  {
    ByteWriter b;
    b.bitvector(du_);
    w.add(kDu, b.take());
  }
  {
    ByteWriter b;
    b.bitvector(bu_);
    w.add(kBu, b.take());
  }
  if (!boosted_) {
    {
      ByteWriter b;
      write_huffman(b, plain_.code());
      w.add(kPHuf, b.take());
    }
    {
      ByteWriter b;
      b.bitvector(plain_.payload());
      w.add(kPPay, b.take());
    }
    {
      ByteWriter b;
      b.bitvector(plain_.boundary());
      w.add(kPBnd, b.take());
    }
  } else {
    {
      ByteWriter b;
      b.u32(booster_.class_count());
      for (const Huffman& h : booster_.tables()) write_huffman(b, h);
      w.add(kBHuf, b.take());
    }
    {
      ByteWriter b;
      b.bitvector(booster_.payload());
      w.add(kBPay, b.take());
    }
    {
      ByteWriter b;
      b.bitvector(booster_.boundary());
      w.add(kBBnd, b.take());
    }
    {
      ByteWriter b;
      b.bitvector(booster_.marker());
      w.add(kMark, b.take());
    }
    {
      ByteWriter b;
      b.bitvector(booster_.samples());
      w.add(kSamp, b.take());
    }
  }
  return w.finish();
}

SuccinctTree SuccinctTree::load(const std::vector<uint8_t>& bytes) {
  ContainerReader r(bytes);
  for (const std::string& tag : r.tags()) {
    static const char* const known[] = {kHead, kAlph, kDict, kBp,   kDu,
                                        kBu,   kPHuf, kPPay, kPBnd, kBHuf,
                                        kBPay, kBBnd, kMark, kSamp};
    bool ok = false;
    for (const char* t : known) ok = ok || tag == t;
    if (!ok) throw std::runtime_error("container: unexpected section " + tag);
  }
  Stored s;
  {
    ByteReader b(r.get(kHead));
    s.k = b.u32();
    s.m = b.u64();
    s.boosted = b.u8() != 0;
    s.d = b.u32();
    s.sigma_small = b.u32();
    s.n = b.u64();
    s.clusters = b.u64();
    b.expect_end();
    if (s.m == 0 || s.d == 0 || s.n == 0 || s.clusters == 0)
      throw std::runtime_error("header carries an empty parameter");
  }
  if (s.boosted) {
    for (const char* t : {kPHuf, kPPay, kPBnd})
      if (r.has(t))
        throw std::runtime_error("container: section from the other codec");
  } else {
    for (const char* t : {kBHuf, kBPay, kBBnd, kMark, kSamp})
      if (r.has(t))
        throw std::runtime_error("container: section from the other codec");
  }
  {
    ByteReader b(r.get(kAlph));
    uint32_t cnt = b.u32();
    std::vector<std::string> toks;
    toks.reserve(cnt);
    for (uint32_t i = 0; i < cnt; ++i) {
      uint32_t len = b.u32();
      const uint8_t* p = b.raw(len);
      toks.emplace_back(reinterpret_cast<const char*>(p), len);
    }
    b.expect_end();
    s.alpha = Alphabet::from_tokens(std::move(toks));
  }
  {
    const std::vector<uint8_t>& img = r.get(kDict);
    ByteReader b(img);
    uint32_t cnt = b.u32();
    size_t at = b.offset();
    s.dict.reserve(cnt);
    for (uint32_t i = 0; i < cnt; ++i) {
      size_t used = 0;
      s.dict.push_back(ClusterDescription::from_canonical_bytes(
          img.data() + at, img.size() - at, used));
      at += used;
    }
    if (at != img.size())
      throw std::runtime_error("dictionary section has trailing bytes");
  }
  {
    ByteReader b(r.get(kBp));
    s.bp = BPTree::from_bits(b.bitvector());
    b.expect_end();
  }
  {
    ByteReader b(r.get(kDu));
    s.du = b.bitvector();
    b.expect_end();
  }
  {
    ByteReader b(r.get(kBu));
    s.bu = b.bitvector();
    b.expect_end();
  }
  if (!s.boosted) {
    ByteReader hb(r.get(kPHuf));
    Huffman code = read_huffman(hb);
    hb.expect_end();
    ByteReader pb(r.get(kPPay));
    BitVector payload = pb.bitvector();
    pb.expect_end();
    ByteReader bb(r.get(kPBnd));
    BitVector boundary = bb.bitvector();
    bb.expect_end();
    s.plain = PlainLabelCodec::assemble(std::move(code), std::move(payload),
                                        std::move(boundary));
  } else {
    ByteReader hb(r.get(kBHuf));
    uint32_t cnt = hb.u32();
    std::vector<Huffman> tables;
    tables.reserve(cnt);
    for (uint32_t i = 0; i < cnt; ++i) tables.push_back(read_huffman(hb));
    hb.expect_end();
    ByteReader pb(r.get(kBPay));
    BitVector payload = pb.bitvector();
    pb.expect_end();
    ByteReader bb(r.get(kBBnd));
    BitVector boundary = bb.bitvector();
    bb.expect_end();
    ByteReader mb(r.get(kMark));
    BitVector marker = mb.bitvector();
    mb.expect_end();
    ByteReader sb(r.get(kSamp));
    BitVector samples = sb.bitvector();
    sb.expect_end();
    s.booster = BoostedLabelCodec::assemble(
        s.k, s.alpha.size(), s.d, std::move(tables), std::move(payload),
        std::move(boundary), std::move(marker), std::move(samples));
  }
  SuccinctTree out;
  out.init(std::move(s));
  return out;
}

// --- reporting and introspection --------------------------------------------

SizeReport SuccinctTree::size_report() const {
  SizeReport rep;
  rep.nodes = n_;
  rep.sigma = alpha_.size();
  rep.clusters = K_;
  rep.dict_entries = dict_.size();
  std::vector<uint8_t> bytes = serialize();
  rep.file_bytes = bytes.size();
  ContainerReader r(std::move(bytes));
  for (const char* tag : {kHead, kAlph, kDict, kBp, kDu, kBu, kPHuf, kPPay,
                          kPBnd, kBHuf, kBPay, kBBnd, kMark, kSamp})
    if (r.has(tag)) rep.stored_bytes.emplace_back(tag, r.section_bytes(tag));

  auto add = [&](const char* name, uint64_t bits) {
    rep.derived_bits.emplace_back(name, bits);
    rep.derived_total_bits += bits;
  };
  add("cluster-tree arrays",
      32ull * (tp_parent_.size() + tp_childidx_.size() +
               tp_childstart_.size() + tp_child_.size()));
  add("ancestor lifting", 32ull * lift_.size() * K_);
  add("parenthesis directories",
      bp_.space_bits() > bp_.bit_count() ? bp_.space_bits() - bp_.bit_count()
                                         : 0);
  add("degree-stream directories", du_.overhead_bits() + bu_.overhead_bits());
  add("first-member marks", marks_.payload_bits() + marks_.overhead_bits());
  add("member-count sums", prefn_.space_bits());
  add("per-edge tree sums", trees_.space_bits());
  add("weighted-depth sums", wpos_.space_bits() + wneg_.space_bits());
  add("entry gap table", 64ull * ext_cum_.size());
  add("entry port table", 32ull * entry_local_.size());
  if (boosted_) add("codec class ids", 32ull * K_);
  if (label_ops_) {
    uint64_t bits = 0;
    for (size_t a = 0; a < lab_trees_.size(); ++a)
      bits += lab_trees_[a].space_bits() + lab_wpos_[a].space_bits() +
              lab_wneg_[a].space_bits();
    add("per-label structures", bits);
  }
  return rep;
}

uint32_t SuccinctTree::symbol_at(size_t cluster) const {
  if (cluster >= K_) throw std::out_of_range("cluster id out of range");
  return sym(cluster);
}

const PlainLabelCodec& SuccinctTree::plain_codec() const {
  if (boosted_) throw std::logic_error("structure uses the boosted codec");
  return plain_;
}

const BoostedLabelCodec& SuccinctTree::boosted_codec() const {
  if (!boosted_) throw std::logic_error("structure uses the plain codec");
  return booster_;
}

node_t SuccinctTree::cluster_first(size_t cluster) const {
  if (cluster >= K_) throw std::out_of_range("cluster id out of range");
  return static_cast<node_t>(marks_.select1(cluster + 1));
}

uint64_t SuccinctTree::cluster_size(size_t cluster) const {
  if (cluster >= K_) throw std::out_of_range("cluster id out of range");
  return prefn_.value(cluster + 1);
}

std::pair<uint32_t, uint32_t> SuccinctTree::locate(node_t v) const {
  check_node(v);
  return to_local(v);
}

}  // namespace ltsx
