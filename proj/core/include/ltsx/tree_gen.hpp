#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// Random ordered tree: node i attaches under a uniformly random earlier node
// (new child appended on the right); labels drawn uniformly from sigma.
struct UniformSpec {
  size_t n = 1;
  uint32_t sigma = 1;
};

// Shape driven by a degree distribution: the frontier is processed FIFO and
// each node draws its degree from `dist` restricted to what the remaining
// node budget allows.  The last frontier node must keep the tree growing
// while budget remains; if no feasible degree exists in the support, the
// degree is capped to the budget (off-distribution, can only happen when the
// support cannot tile n).  Labels are uniform over sigma.
struct DegreeDistSpec {
  size_t n = 1;
  std::vector<std::pair<uint32_t, double>> dist;  // (degree, weight)
  uint32_t sigma = 1;
};

// Label-conditioned generation: a node's label is drawn conditioned on the
// parent's label, its degree conditioned on its own label.
struct CorrelatedRule {
  std::vector<double> root_dist;                 // sigma weights
  std::vector<std::vector<double>> label_given_parent;  // sigma x sigma rows
  std::vector<std::vector<std::pair<uint32_t, double>>> degree_given_label;
  // When the node budget forces degree 0 on a node whose label would branch,
  // the node is relabeled to leaf_label (whose degree law should be {0}).
  std::optional<label_t> leaf_label;
  // When the last frontier node must branch but its label cannot, it is
  // relabeled to continuation_label (whose degree law should allow degree 1).
  std::optional<label_t> continuation_label;
};

struct CorrelatedSpec {
  size_t n = 1;
  uint32_t sigma = 1;
  CorrelatedRule rule;
};

using GenSpec = std::variant<UniformSpec, DegreeDistSpec, CorrelatedSpec>;

// Deterministic for a fixed (spec, seed); always returns exactly n nodes.
LabeledTree generate_tree(const GenSpec& spec, uint64_t seed);

// Token used for label id i in generated trees ("a".."z", then "s<i>").
std::string gen_token(uint32_t i, uint32_t sigma);

}  // namespace ltsx
