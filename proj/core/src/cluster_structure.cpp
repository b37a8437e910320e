#include "ltsx/cluster_structure.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ltsx/entropy.hpp"

namespace ltsx {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t take_u32(const uint8_t* p, size_t len, size_t& at) {
  if (at + 4 > len) throw std::invalid_argument("truncated cluster description");
  uint32_t v = static_cast<uint32_t>(p[at]) |
               static_cast<uint32_t>(p[at + 1]) << 8 |
               static_cast<uint32_t>(p[at + 2]) << 16 |
               static_cast<uint32_t>(p[at + 3]) << 24;
  at += 4;
  return v;
}

}  // namespace

std::vector<uint8_t> ClusterDescription::canonical_bytes() const {
  std::vector<uint8_t> out;
  put_u32(out, static_cast<uint32_t>(context.size()));
  for (label_t l : context) put_u32(out, l);
  put_u32(out, static_cast<uint32_t>(records.size()));
  for (const ClusterRecord& r : records) {
    out.push_back(r.is_port ? 1 : 0);
    put_u32(out, r.label);
    if (!r.is_port) put_u32(out, r.deg);
  }
  return out;
}

ClusterDescription ClusterDescription::from_canonical_bytes(const uint8_t* p,
                                                            size_t len,
                                                            size_t& consumed) {
  ClusterDescription d;
  size_t at = 0;
  const uint32_t clen = take_u32(p, len, at);
  if (clen > len) throw std::invalid_argument("corrupt cluster description");
  d.context.reserve(clen);
  for (uint32_t i = 0; i < clen; ++i) d.context.push_back(take_u32(p, len, at));
  const uint32_t rcount = take_u32(p, len, at);
  if (rcount > len) throw std::invalid_argument("corrupt cluster description");
  d.records.reserve(rcount);
  for (uint32_t i = 0; i < rcount; ++i) {
    if (at >= len) throw std::invalid_argument("truncated cluster description");
    ClusterRecord r;
    const uint8_t flag = p[at++];
    if (flag > 1) throw std::invalid_argument("corrupt cluster description");
    r.is_port = flag;
    r.label = take_u32(p, len, at);
    if (!r.is_port) r.deg = take_u32(p, len, at);
    d.records.push_back(r);
  }
  consumed = at;
  return d;
}

uint64_t ClusterDescription::fnv1a() const {
  uint64_t h = 14695981039346656037ull;
  for (uint8_t b : canonical_bytes()) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

DecodedShape decode_shape(const ClusterDescription& d) {
  const size_t n = d.records.size();
  if (n == 0) throw std::invalid_argument("empty cluster description");
  DecodedShape s;
  s.parent.assign(n, UINT32_MAX);
  s.tree_depth.assign(n, 0);
  // Stack of open nodes with the number of children still expected.
  std::vector<std::pair<uint32_t, uint32_t>> open;
  for (uint32_t i = 0; i < n; ++i) {
    const ClusterRecord& r = d.records[i];
    if (open.empty()) {
      s.roots.push_back(i);
    } else {
      auto& top = open.back();
      s.parent[i] = top.first;
      s.tree_depth[i] = s.tree_depth[top.first] + 1;
      if (--top.second == 0) open.pop_back();
    }
    if (r.is_port) {
      s.ports.push_back(i);
    } else if (r.deg > 0) {
      if (r.deg >= n) throw std::invalid_argument("corrupt cluster description");
      open.emplace_back(i, r.deg);
    }
  }
  if (!open.empty()) {
    throw std::invalid_argument("cluster description ends with open nodes");
  }
  return s;
}

std::vector<label_t> record_context(const ClusterDescription& d,
                                    const DecodedShape& shape, uint32_t i,
                                    uint32_t k) {
  std::vector<label_t> chain;  // labels root -> parent of i
  for (uint32_t a = shape.parent[i]; a != UINT32_MAX; a = shape.parent[a]) {
    chain.push_back(d.records[a].label);
  }
  std::reverse(chain.begin(), chain.end());
  std::vector<label_t> full(d.context);
  full.insert(full.end(), chain.begin(), chain.end());
  if (full.size() > k) full.erase(full.begin(), full.end() - k);
  return full;
}

ClusterStructure build_cluster_structure(const LabeledTree& t,
                                         const Clustering& c, uint32_t k) {
  const size_t n = t.size();
  const size_t kc = c.cluster_count();
  ClusterStructure s;
  s.k = k;
  s.m = c.m;
  s.count = kc;

  // Parent cluster of each emitted cluster and ordered child lists.
  std::vector<uint32_t> eparent(kc, NO_NODE);
  std::vector<std::vector<uint32_t>> ekids(kc);
  uint32_t eroot = NO_NODE;
  for (uint32_t e = 0; e < kc; ++e) {
    const node_t p = t.parent(c.roots[e][0]);
    if (p == NO_NODE) {
      eroot = e;
    } else {
      eparent[e] = c.cluster_of[p];
    }
  }
  if (eroot == NO_NODE) throw std::logic_error("clustering lost the tree root");
  for (uint32_t e = 0; e < kc; ++e) {
    if (eparent[e] != NO_NODE) ekids[eparent[e]].push_back(e);
  }
  for (auto& kids : ekids) {
    std::sort(kids.begin(), kids.end(), [&](uint32_t a, uint32_t b) {
      return c.roots[a][0] < c.roots[b][0];
    });
  }

  // Preorder of the cluster tree (equals ascending first-root order).
  std::vector<uint32_t> order;
  order.reserve(kc);
  std::vector<uint32_t> tid(kc, 0);
  std::vector<uint32_t> dfs;
  dfs.push_back(eroot);
  while (!dfs.empty()) {
    const uint32_t e = dfs.back();
    dfs.pop_back();
    tid[e] = static_cast<uint32_t>(order.size());
    order.push_back(e);
    for (size_t j = ekids[e].size(); j-- > 0;) dfs.push_back(ekids[e][j]);
  }

  s.parent.assign(kc, NO_NODE);
  s.children.resize(kc);
  s.roots.resize(kc);
  for (uint32_t v = 0; v < kc; ++v) {
    const uint32_t e = order[v];
    if (eparent[e] != NO_NODE) s.parent[v] = tid[eparent[e]];
    s.children[v].reserve(ekids[e].size());
    for (uint32_t kid : ekids[e]) s.children[v].push_back(tid[kid]);
    s.roots[v] = c.roots[e];
  }

  // Members in local preorder (= ascending original id) and port lists.
  s.members.resize(kc);
  s.ports.resize(kc);
  s.cluster_id.assign(n, 0);
  s.local_idx.assign(n, 0);
  for (node_t g = 0; g < n; ++g) {
    const uint32_t v = tid[c.cluster_of[g]];
    s.cluster_id[g] = v;
    s.local_idx[g] = static_cast<uint32_t>(s.members[v].size());
    s.members[v].push_back(g);
    if (c.is_port[g]) s.ports[v].push_back(g);
  }

  // Depth of every node within its own cluster tree.
  std::vector<uint32_t> ltd(n, 0);
  std::vector<uint8_t> isroot(n, 0);
  for (const auto& roots : s.roots)
    for (node_t r : roots) isroot[r] = 1;
  for (node_t g = 1; g < n; ++g) {
    if (!isroot[g]) ltd[g] = ltd[t.parent(g)] + 1;
  }

  s.nsize.resize(kc);
  for (uint32_t v = 0; v < kc; ++v) s.nsize[v] = s.members[v].size();
  s.subtree_t.assign(kc, 0);
  for (size_t v = kc; v-- > 0;) {
    uint64_t sum = s.nsize[v];
    for (uint32_t kid : s.children[v]) sum += s.subtree_t[kid];
    s.subtree_t[v] = sum;
  }

  s.attach_port.assign(kc, NO_NODE);
  s.edge_weight.assign(kc, 0);
  for (uint32_t v = 1; v < kc; ++v) {
    const node_t p = t.parent(s.roots[v][0]);
    s.attach_port[v] = p;
    s.edge_weight[v] = ltd[p] + 1;
  }

  // Port degree sequences: children arrive sorted by port, then left to
  // right, so a single pointer sweep counts them per port.
  s.entries.resize(kc);
  for (uint32_t v = 0; v < kc; ++v) {
    const auto& ports = s.ports[v];
    auto& counts = s.entries[v];
    if (ports.empty()) {
      if (!s.children[v].empty())
        throw std::logic_error("cluster without ports has children");
      counts.assign(1, 0);
      continue;
    }
    counts.assign(ports.size(), 0);
    size_t pi = 0;
    for (uint32_t kid : s.children[v]) {
      const node_t ap = s.attach_port[kid];
      while (pi < ports.size() && ports[pi] != ap) ++pi;
      if (pi == ports.size())
        throw std::logic_error("child cluster attached to a non-port");
      ++counts[pi];
    }
    for (uint32_t cnt : counts) {
      if (cnt == 0) throw std::logic_error("port without attached clusters");
    }
  }

  // Descriptions and the deduplicating dictionary.
  s.symbol.assign(kc, 0);
  std::unordered_map<std::string, uint32_t> seen;
  for (uint32_t v = 0; v < kc; ++v) {
    ClusterDescription d;
    d.context = node_context(t, s.roots[v][0], k);
    d.records.reserve(s.members[v].size());
    for (node_t g : s.members[v]) {
      ClusterRecord r;
      r.is_port = c.is_port[g];
      r.label = t.label(g);
      r.deg = r.is_port ? 0 : t.degree(g);
      d.records.push_back(r);
    }
    const std::vector<uint8_t> bytes = d.canonical_bytes();
    std::string key(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    auto it = seen.find(key);
    if (it == seen.end()) {
      const uint32_t id = static_cast<uint32_t>(s.dict.size());
      seen.emplace(std::move(key), id);
      s.dict.push_back(std::move(d));
      s.symbol[v] = id;
    } else {
      s.symbol[v] = it->second;
    }
  }
  return s;
}

LabeledTree reassemble_tree(const Alphabet& alpha,
                            const std::vector<ClusterDescription>& dict,
                            const std::vector<uint32_t>& symbol,
                            const std::vector<std::vector<uint32_t>>& children,
                            const std::vector<std::vector<uint32_t>>& port_counts) {
  const size_t kc = symbol.size();
  if (children.size() != kc || port_counts.size() != kc || kc == 0) {
    throw std::invalid_argument("reassemble: inconsistent cluster counts");
  }
  std::vector<DecodedShape> shapes(kc);
  std::vector<size_t> base(kc);
  size_t n = 0;
  for (size_t v = 0; v < kc; ++v) {
    if (symbol[v] >= dict.size())
      throw std::invalid_argument("reassemble: symbol out of range");
    shapes[v] = decode_shape(dict[symbol[v]]);
    base[v] = n;
    n += dict[symbol[v]].records.size();
  }

  std::vector<label_t> labels(n);
  std::vector<std::vector<uint32_t>> kids(n);
  for (size_t v = 0; v < kc; ++v) {
    const ClusterDescription& d = dict[symbol[v]];
    const DecodedShape& sh = shapes[v];
    for (uint32_t i = 0; i < d.records.size(); ++i) {
      if (d.records[i].label >= alpha.size())
        throw std::invalid_argument("reassemble: label out of range");
      labels[base[v] + i] = d.records[i].label;
      if (sh.parent[i] != UINT32_MAX) {
        kids[base[v] + sh.parent[i]].push_back(
            static_cast<uint32_t>(base[v] + i));
      }
    }
  }

  for (size_t v = 0; v < kc; ++v) {
    const DecodedShape& sh = shapes[v];
    const auto& counts = port_counts[v];
    if (sh.ports.empty()) {
      const bool leaf_entry = counts.size() == 1 && counts[0] == 0;
      if (!leaf_entry || !children[v].empty())
        throw std::invalid_argument("reassemble: port counts mismatch");
      continue;
    }
    if (counts.size() != sh.ports.size())
      throw std::invalid_argument("reassemble: port counts mismatch");
    size_t ci = 0;
    for (size_t r = 0; r < counts.size(); ++r) {
      if (counts[r] == 0)
        throw std::invalid_argument("reassemble: port without children");
      for (uint32_t e = 0; e < counts[r]; ++e) {
        if (ci >= children[v].size())
          throw std::invalid_argument("reassemble: missing child clusters");
        const uint32_t cv = children[v][ci++];
        if (cv >= kc)
          throw std::invalid_argument("reassemble: child cluster out of range");
        for (uint32_t root : shapes[cv].roots) {
          kids[base[v] + sh.ports[r]].push_back(
              static_cast<uint32_t>(base[cv] + root));
        }
      }
    }
    if (ci != children[v].size())
      throw std::invalid_argument("reassemble: unattached child clusters");
  }

  if (shapes[0].roots.size() != 1)
    throw std::invalid_argument("reassemble: root cluster must be one tree");
  return LabeledTree::from_children(
      alpha, labels, kids, static_cast<uint32_t>(base[0] + shapes[0].roots[0]));
}

}  // namespace ltsx
