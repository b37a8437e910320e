#include "ltsx/tree_gen.hpp"

#include <deque>
#include <random>

namespace ltsx {

std::string gen_token(uint32_t i, uint32_t sigma) {
  if (sigma <= 26) return std::string(1, static_cast<char>('a' + i));
  return "s" + std::to_string(i);
}

namespace {

Alphabet make_alphabet(uint32_t sigma) {
  Alphabet a;
  for (uint32_t i = 0; i < sigma; ++i) a.intern(gen_token(i, sigma));
  return a;
}

// Uniform double in [0,1) from the raw engine; avoids the
// implementation-defined std::uniform_real_distribution.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t below(std::mt19937_64& rng, uint64_t bound) {
  // Bounded draw by rejection; bias-free.
  uint64_t mask = ~uint64_t{0};
  uint64_t limit = mask - mask % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Weighted pick over (value, weight) pairs; weights need not be normalized.
template <typename V>
V pick(std::mt19937_64& rng, const std::vector<std::pair<V, double>>& w) {
  double total = 0;
  for (auto& [v, p] : w) total += p;
  if (total <= 0) throw std::invalid_argument("generate_tree: non-positive weight vector");
  double r = unit(rng) * total;
  for (auto& [v, p] : w) {
    if (r < p) return v;
    r -= p;
  }
  return w.back().first;
}

uint32_t pick_index(std::mt19937_64& rng, const std::vector<double>& w) {
  std::vector<std::pair<uint32_t, double>> pairs;
  pairs.reserve(w.size());
  for (uint32_t i = 0; i < w.size(); ++i) pairs.emplace_back(i, w[i]);
  return pick(rng, pairs);
}

LabeledTree gen_uniform(const UniformSpec& s, std::mt19937_64& rng) {
  if (s.n == 0) throw std::invalid_argument("generate_tree: n must be positive");
  if (s.sigma == 0) throw std::invalid_argument("generate_tree: sigma must be positive");
  std::vector<label_t> labels(s.n);
  std::vector<std::vector<uint32_t>> children(s.n);
  for (size_t i = 0; i < s.n; ++i) {
    labels[i] = static_cast<label_t>(below(rng, s.sigma));
    if (i > 0) children[below(rng, i)].push_back(static_cast<uint32_t>(i));
  }
  return LabeledTree::from_children(make_alphabet(s.sigma), labels, children, 0);
}

// Shared frontier growth for the degree-driven generators.
// degree_of(u_label, budget, must_branch) returns the degree to use and may
// adjust the node's label through the reference.
template <typename DegreeFn>
LabeledTree grow(size_t n, uint32_t sigma, label_t root_label, DegreeFn degree_of,
                 std::mt19937_64& rng,
                 const std::vector<std::vector<double>>* label_given_parent) {
  std::vector<label_t> labels{root_label};
  std::vector<std::vector<uint32_t>> children(1);
  labels.reserve(n);
  children.reserve(n);
  std::deque<uint32_t> frontier{0};
  size_t created = 1;
  while (!frontier.empty()) {
    uint32_t u = frontier.front();
    frontier.pop_front();
    size_t budget = n - created;
    bool must_branch = frontier.empty() && budget > 0;
    uint32_t d = degree_of(labels[u], budget, must_branch);
    for (uint32_t j = 0; j < d; ++j) {
      label_t l = label_given_parent
                      ? static_cast<label_t>(pick_index(rng, (*label_given_parent)[labels[u]]))
                      : static_cast<label_t>(below(rng, sigma));
      labels.push_back(l);
      children.emplace_back();
      children[u].push_back(static_cast<uint32_t>(created));
      frontier.push_back(static_cast<uint32_t>(created));
      ++created;
    }
  }
  if (created != n) throw std::logic_error("generate_tree: frontier died before budget");
  return LabeledTree::from_children(make_alphabet(sigma), labels, children, 0);
}

// Restrict a degree law to the budget (and to >= 1 when the node must keep
// the tree alive); empty restriction falls back to capping at the budget.
uint32_t draw_degree(std::mt19937_64& rng,
                     const std::vector<std::pair<uint32_t, double>>& dist, size_t budget,
                     bool must_branch, bool& feasible) {
  std::vector<std::pair<uint32_t, double>> ok;
  for (auto& [d, w] : dist)
    if (d <= budget && (!must_branch || d >= 1) && w > 0) ok.emplace_back(d, w);
  feasible = !ok.empty();
  if (!feasible) return static_cast<uint32_t>(must_branch ? std::min<size_t>(budget, 1) : 0);
  return pick(rng, ok);
}

LabeledTree gen_degree_dist(const DegreeDistSpec& s, std::mt19937_64& rng) {
  if (s.n == 0) throw std::invalid_argument("generate_tree: n must be positive");
  if (s.sigma == 0) throw std::invalid_argument("generate_tree: sigma must be positive");
  if (s.dist.empty()) throw std::invalid_argument("generate_tree: empty degree distribution");
  label_t root = static_cast<label_t>(below(rng, s.sigma));
  auto degree_of = [&](label_t&, size_t budget, bool must_branch) -> uint32_t {
    bool feasible;
    uint32_t d = draw_degree(rng, s.dist, budget, must_branch, feasible);
    if (!feasible && !must_branch) return 0;
    if (!feasible) return static_cast<uint32_t>(std::min<size_t>(budget, 1));
    return d;
  };
  return grow(s.n, s.sigma, root, degree_of, rng, nullptr);
}

LabeledTree gen_correlated(const CorrelatedSpec& s, std::mt19937_64& rng) {
  if (s.n == 0) throw std::invalid_argument("generate_tree: n must be positive");
  const auto& r = s.rule;
  if (r.root_dist.size() != s.sigma || r.label_given_parent.size() != s.sigma ||
      r.degree_given_label.size() != s.sigma)
    throw std::invalid_argument("generate_tree: rule dimensions must match sigma");

  label_t root = static_cast<label_t>(pick_index(rng, r.root_dist));
  auto degree_of = [&](label_t& lab, size_t budget, bool must_branch) -> uint32_t {
    bool feasible;
    uint32_t d = draw_degree(rng, r.degree_given_label[lab], budget, must_branch, feasible);
    if (feasible) return d;
    if (must_branch && r.continuation_label) {
      lab = *r.continuation_label;
      d = draw_degree(rng, r.degree_given_label[lab], budget, true, feasible);
      if (feasible) return d;
    }
    if (!must_branch && r.leaf_label) {
      lab = *r.leaf_label;
      return 0;
    }
    return static_cast<uint32_t>(must_branch ? std::min<size_t>(budget, 1) : 0);
  };
  return grow(s.n, s.sigma, root, degree_of, rng, &r.label_given_parent);
}

}  // namespace

LabeledTree generate_tree(const GenSpec& spec, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::visit(
      [&](const auto& s) -> LabeledTree {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformSpec>)
          return gen_uniform(s, rng);
        else if constexpr (std::is_same_v<T, DegreeDistSpec>)
          return gen_degree_dist(s, rng);
        else
          return gen_correlated(s, rng);
      },
      spec);
}

}  // namespace ltsx
