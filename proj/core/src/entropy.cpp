#include "ltsx/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ltsx {

namespace {

// log2 with long double accumulation keeps the 1e-9 tolerances honest on
// million-term sums.
inline long double lg(long double x) { return std::log2(x); }

}  // namespace

double h0_total(std::span<const uint64_t> counts) {
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) return 0.0;
  long double acc = 0;
  for (uint64_t c : counts) {
    if (c == 0) continue;
    acc -= static_cast<long double>(c) * lg(static_cast<long double>(c) / total);
  }
  return static_cast<double>(acc);
}

double h0_total_of(std::span<const uint32_t> symbols) {
  std::unordered_map<uint32_t, uint64_t> cnt;
  for (uint32_t s : symbols) ++cnt[s];
  std::vector<uint64_t> counts;
  counts.reserve(cnt.size());
  for (auto& [s, c] : cnt) counts.push_back(c);
  return h0_total(counts);
}

double string_hk(std::span<const uint32_t> s, uint32_t k) {
  if (k == 0) return h0_total_of(s);
  if (s.size() <= k) return 0.0;
  // t_w counts contexts that are followed by a symbol; t_ws the extensions.
  std::unordered_map<std::string, uint64_t> tw, tws;
  std::string key;
  for (size_t i = k; i < s.size(); ++i) {
    key.assign(reinterpret_cast<const char*>(&s[i - k]), k * sizeof(uint32_t));
    ++tw[key];
    key.append(reinterpret_cast<const char*>(&s[i]), sizeof(uint32_t));
    ++tws[key];
  }
  long double acc = 0;
  for (auto& [ws, c] : tws) {
    std::string w = ws.substr(0, ws.size() - sizeof(uint32_t));
    acc -= static_cast<long double>(c) * lg(static_cast<long double>(c) / tw[w]);
  }
  return static_cast<double>(acc);
}

std::vector<label_t> node_context(const LabeledTree& t, node_t v, uint32_t k) {
  std::vector<label_t> ctx;
  node_t u = t.parent(v);
  while (u != NO_NODE && ctx.size() < k) {
    ctx.push_back(t.label(u));
    u = t.parent(u);
  }
  std::reverse(ctx.begin(), ctx.end());
  return ctx;
}

std::string pack_context(std::span<const label_t> ctx) {
  std::string key;
  key.reserve(ctx.size() * sizeof(label_t));
  for (label_t l : ctx) key.append(reinterpret_cast<const char*>(&l), sizeof(label_t));
  return key;
}

std::string ContextTables::tag(char kind, uint64_t v) {
  std::string s(1, kind);
  s.append(reinterpret_cast<const char*>(&v), sizeof(uint64_t));
  return s;
}

ContextTables ContextTables::build(const LabeledTree& t, uint32_t k) {
  ContextTables tab;
  tab.k_ = k;
  tab.n_ = t.size();
  // Iterative DFS carrying the running ancestor-label path; the context of a
  // node is the last min(k, depth) entries of the path.
  std::vector<label_t> path;
  struct Frame {
    node_t v;
    bool entered;
  };
  std::vector<Frame> stack{{0, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.entered) {
      path.pop_back();
      continue;
    }
    size_t len = std::min<size_t>(k, path.size());
    std::string key = pack_context(std::span<const label_t>(path).last(len));
    label_t l = t.label(f.v);
    uint32_t d = t.degree(f.v);
    ++tab.ctx_[key];
    ++tab.ctx_label_[key + tag('L', l)];
    ++tab.ctx_deg_[key + tag('D', d)];
    ++tab.ctx_label_deg_[key + tag('L', l) + tag('D', d)];

    stack.push_back({f.v, true});
    path.push_back(l);
    // Children pushed in reverse for left-to-right traversal (order does not
    // matter for the tallies, but keeps traversal deterministic).
    std::vector<node_t> cs;
    for (node_t c = t.first_child(f.v); c != NO_NODE; c = t.next_sibling(c)) cs.push_back(c);
    for (size_t i = cs.size(); i-- > 0;) stack.push_back({cs[i], false});
  }
  return tab;
}

double ContextTables::p_label_given_ctx(const std::string& key, label_t l) const {
  uint64_t num = t_ctx_label(key, l), den = t_ctx(key);
  if (num == 0)
    throw std::invalid_argument("p_label_given_ctx: zero empirical count (table mismatch)");
  return static_cast<double>(num) / static_cast<double>(den);
}

double ContextTables::p_deg_given_ctx(const std::string& key, uint32_t d) const {
  uint64_t num = t_ctx_deg(key, d), den = t_ctx(key);
  if (num == 0)
    throw std::invalid_argument("p_deg_given_ctx: zero empirical count (table mismatch)");
  return static_cast<double>(num) / static_cast<double>(den);
}

double ContextTables::p_deg_given_ctx_label(const std::string& key, label_t l,
                                            uint32_t d) const {
  uint64_t num = t_ctx_label_deg(key, l, d), den = t_ctx_label(key, l);
  if (num == 0)
    throw std::invalid_argument("p_deg_given_ctx_label: zero empirical count (table mismatch)");
  return static_cast<double>(num) / static_cast<double>(den);
}

double ContextTables::p_label_given_ctx_deg(const std::string& key, label_t l,
                                            uint32_t d) const {
  uint64_t num = t_ctx_label_deg(key, l, d), den = t_ctx_deg(key, d);
  if (num == 0)
    throw std::invalid_argument("p_label_given_ctx_deg: zero empirical count (table mismatch)");
  return static_cast<double>(num) / static_cast<double>(den);
}

namespace {

// One DFS pass accumulating the requested per-node terms from the tables.
template <typename Fn>
long double accumulate_nodes(const LabeledTree& t, uint32_t k, Fn per_node) {
  std::vector<label_t> path;
  struct Frame {
    node_t v;
    bool entered;
  };
  long double acc = 0;
  std::vector<Frame> stack{{0, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.entered) {
      path.pop_back();
      continue;
    }
    size_t len = std::min<size_t>(k, path.size());
    std::string key = pack_context(std::span<const label_t>(path).last(len));
    acc += per_node(key, t.label(f.v), t.degree(f.v));
    stack.push_back({f.v, true});
    path.push_back(t.label(f.v));
    std::vector<node_t> cs;
    for (node_t c = t.first_child(f.v); c != NO_NODE; c = t.next_sibling(c)) cs.push_back(c);
    for (size_t i = cs.size(); i-- > 0;) stack.push_back({cs[i], false});
  }
  return acc;
}

}  // namespace

double label_entropy(const LabeledTree& t, uint32_t k) {
  ContextTables tab = ContextTables::build(t, k);
  return static_cast<double>(accumulate_nodes(t, k, [&](const std::string& key, label_t l,
                                                        uint32_t) -> long double {
    return -lg(static_cast<long double>(tab.t_ctx_label(key, l)) / tab.t_ctx(key));
  }));
}

double tree_entropy(const LabeledTree& t) {
  std::unordered_map<uint32_t, uint64_t> cnt;
  for (node_t v = 0; v < t.size(); ++v) ++cnt[t.degree(v)];
  std::vector<uint64_t> counts;
  for (auto& [d, c] : cnt) counts.push_back(c);
  return h0_total(counts);
}

double mixed_label_given_tree(const LabeledTree& t, uint32_t k) {
  ContextTables tab = ContextTables::build(t, k);
  return static_cast<double>(accumulate_nodes(t, k, [&](const std::string& key, label_t l,
                                                        uint32_t d) -> long double {
    return -lg(static_cast<long double>(tab.t_ctx_label_deg(key, l, d)) /
               tab.t_ctx_deg(key, d));
  }));
}

double mixed_tree_given_label(const LabeledTree& t, uint32_t k) {
  ContextTables tab = ContextTables::build(t, k);
  return static_cast<double>(accumulate_nodes(t, k, [&](const std::string& key, label_t l,
                                                        uint32_t d) -> long double {
    return -lg(static_cast<long double>(tab.t_ctx_label_deg(key, l, d)) /
               tab.t_ctx_label(key, l));
  }));
}

EntropyReport entropy_report(const LabeledTree& t, uint32_t k) {
  ContextTables tab = ContextTables::build(t, k);
  EntropyReport r;
  std::unordered_map<uint32_t, uint64_t> deg_cnt;
  std::unordered_map<label_t, uint64_t> lab_cnt;
  for (node_t v = 0; v < t.size(); ++v) {
    ++deg_cnt[t.degree(v)];
    ++lab_cnt[t.label(v)];
  }
  {
    std::vector<uint64_t> counts;
    for (auto& [d, c] : deg_cnt) counts.push_back(c);
    r.tree_h = h0_total(counts);
    counts.clear();
    for (auto& [l, c] : lab_cnt) counts.push_back(c);
    r.h0_labels = h0_total(counts);
  }
  long double hk = 0, lgt = 0, tgl = 0;
  accumulate_nodes(t, k, [&](const std::string& key, label_t l, uint32_t d) -> long double {
    long double tk = tab.t_ctx(key);
    long double tkl = tab.t_ctx_label(key, l);
    long double tkd = tab.t_ctx_deg(key, d);
    long double tkld = tab.t_ctx_label_deg(key, l, d);
    hk -= lg(tkl / tk);
    lgt -= lg(tkld / tkd);
    tgl -= lg(tkld / tkl);
    return 0;
  });
  r.label_hk = static_cast<double>(hk);
  r.mixed_label_given_tree = static_cast<double>(lgt);
  r.mixed_tree_given_label = static_cast<double>(tgl);
  return r;
}

}  // namespace ltsx
