#pragma once

#include <cstdint>
#include <string>

#include "ltsx/cluster_structure.hpp"
#include "ltsx/entropy.hpp"

namespace ltsx {

// How the per-record probabilities factor inside a description weight.  All
// three charge a port 1/m and a regular record (m-1)/m structurally; they
// differ in how label and degree split:
//   kIndependent      P(label | ctx) * P(degree | ctx)
//   kDegreeGivenLabel P(label | ctx) * P(degree | ctx, label)
//   kLabelGivenDegree P(degree | ctx) * P(label | ctx, degree),
//                     with ports paying a flat 1/sigma for their label.
enum class WeightVariant : uint32_t {
  kIndependent = 1,
  kDegreeGivenLabel = 2,
  kLabelGivenDegree = 3,
};

const char* to_string(WeightVariant v);
bool parse_weight_variant(const std::string& s, WeightVariant& out);

// -log2 of one description's weight, split into its three factors.  With
// m == 1 a regular record costs log2(1/0) and the total is +infinity; the
// bounds then hold trivially.
struct WeightBreakdown {
  long double context_bits = 0;  // log2(k+1) + |K| log2(sigma)
  long double count_bits = 0;    // log2(2m)
  long double record_bits = 0;   // per-record label/degree/marker charges

  long double total() const { return context_bits + count_bits + record_bits; }
};

WeightBreakdown description_cost(const ClusterDescription& d,
                                 const ContextTables& tables, uint64_t m,
                                 size_t sigma, WeightVariant variant);

// The bound chain evaluated on one clustered tree:
//   string_h0  <=  oracle_bits  <=  explicit_bound.
// string_h0 is |P| * H0(P) of the cluster-label string, oracle_bits sums the
// description costs over cluster instances, and explicit_bound is the closed
// form: the variant's entropy terms plus, per cluster,
// k log2(sigma) + log2(k+1) + log2(2m); per port, log2 m (kLabelGivenDegree
// also log2 sigma); per node, log2(m / (m-1)).
struct BoundReport {
  WeightVariant variant = WeightVariant::kDegreeGivenLabel;
  uint64_t clusters = 0;  // cluster instances
  uint64_t ports = 0;     // port nodes over all clusters
  uint64_t nodes = 0;     // original tree size
  long double string_h0 = 0;
  long double oracle_bits = 0;
  long double explicit_bound = 0;
};

BoundReport bound_report(const LabeledTree& t, const ClusterStructure& s,
                         WeightVariant variant);

}  // namespace ltsx
