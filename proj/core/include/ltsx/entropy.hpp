#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// All entropy values in this project are bit TOTALS (|S|*H, not rates) and
// all logarithms are base 2.

// Zeroth-order total: -sum_s c_s * log2(c_s / N).  Zero counts are skipped.
double h0_total(std::span<const uint64_t> counts);

// Convenience overload tallying a symbol sequence.
double h0_total_of(std::span<const uint32_t> symbols);

// k-th order empirical entropy of a string (total bits).  A position
// contributes only when it has a full k-length left context, so the first k
// symbols cost nothing.  Contexts are tallied only where they are followed
// by a symbol (so the trailing occurrence of a word does not count).
double string_hk(std::span<const uint32_t> s, uint32_t k);

// Labels of the <= k nearest ancestors of v, ancestor-to-node order (nearest
// ancestor last); the root gets the empty context.  Truncated, never padded.
std::vector<label_t> node_context(const LabeledTree& t, node_t v, uint32_t k);

// Packs a context into a flat map key (4 bytes per label, length implicit).
std::string pack_context(std::span<const label_t> ctx);

// Per-context occurrence tables for a tree: for every node v with context
// K_v (see node_context), label l_v and degree d_v, tallies
//   t_K, t_{K,l}, t_{K,d} and t_{K,l,d}.
// Invariants: sum_l t_{K,l} = t_K = sum_d t_{K,d}; sum_K t_K = n.
// With k = 0 the empty context is the universal context (t_{} = n).
class ContextTables {
 public:
  static ContextTables build(const LabeledTree& t, uint32_t k);

  uint32_t k() const { return k_; }
  size_t n() const { return n_; }

  uint64_t t_ctx(const std::string& key) const { return get(ctx_, key); }
  uint64_t t_ctx_label(const std::string& key, label_t l) const {
    return get(ctx_label_, key + tag('L', l));
  }
  uint64_t t_ctx_deg(const std::string& key, uint32_t d) const {
    return get(ctx_deg_, key + tag('D', d));
  }
  uint64_t t_ctx_label_deg(const std::string& key, label_t l, uint32_t d) const {
    return get(ctx_label_deg_, key + tag('L', l) + tag('D', d));
  }

  // Empirical conditionals; throw std::invalid_argument when the numerator
  // is zero (the queried event never occurs under this table).
  double p_label_given_ctx(const std::string& key, label_t l) const;
  double p_deg_given_ctx(const std::string& key, uint32_t d) const;
  double p_deg_given_ctx_label(const std::string& key, label_t l, uint32_t d) const;
  double p_label_given_ctx_deg(const std::string& key, label_t l, uint32_t d) const;

  // Number of distinct contexts observed.
  size_t context_count() const { return ctx_.size(); }

 private:
  static std::string tag(char kind, uint64_t v);
  static uint64_t get(const std::unordered_map<std::string, uint64_t>& m,
                      const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0 : it->second;
  }

  uint32_t k_ = 0;
  size_t n_ = 0;
  std::unordered_map<std::string, uint64_t> ctx_;
  std::unordered_map<std::string, uint64_t> ctx_label_;
  std::unordered_map<std::string, uint64_t> ctx_deg_;
  std::unordered_map<std::string, uint64_t> ctx_label_deg_;
};

// n*Hk(L):   -sum_v log2 P(l_v | K_v).
double label_entropy(const LabeledTree& t, uint32_t k);

// n*H(T):    -sum_v log2 (t_{d_v} / n)  (zeroth order on the degree multiset).
double tree_entropy(const LabeledTree& t);

// n*Hk(L|T): -sum_v log2 ( t_{K,l,d} / t_{K,d} ).
double mixed_label_given_tree(const LabeledTree& t, uint32_t k);

// n*Hk(T|L): -sum_v log2 ( t_{K,l,d} / t_{K,l} ).
double mixed_tree_given_label(const LabeledTree& t, uint32_t k);

// All five measures (plus the label-string H0) in one pass over one table.
struct EntropyReport {
  double h0_labels = 0;           // n*H0 of the label multiset
  double label_hk = 0;            // n*Hk(L)
  double tree_h = 0;              // n*H(T)
  double mixed_label_given_tree = 0;  // n*Hk(L|T)
  double mixed_tree_given_label = 0;  // n*Hk(T|L)
};
EntropyReport entropy_report(const LabeledTree& t, uint32_t k);

}  // namespace ltsx
