#include "ltsx/cluster_bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltsx {

namespace {
constexpr long double kInf = std::numeric_limits<long double>::infinity();

long double regular_marker_bits(uint64_t m) {
  // log2(m / (m - 1)); infinite when m == 1 (the factor (m-1)/m vanishes).
  if (m <= 1) return kInf;
  return log2l(static_cast<long double>(m)) -
         log2l(static_cast<long double>(m - 1));
}
}  // namespace

const char* to_string(WeightVariant v) {
  switch (v) {
    case WeightVariant::kIndependent:
      return "independent";
    case WeightVariant::kDegreeGivenLabel:
      return "degree-given-label";
    case WeightVariant::kLabelGivenDegree:
      return "label-given-degree";
  }
  return "?";
}

bool parse_weight_variant(const std::string& s, WeightVariant& out) {
  if (s == "1" || s == "independent") {
    out = WeightVariant::kIndependent;
  } else if (s == "2" || s == "degree-given-label") {
    out = WeightVariant::kDegreeGivenLabel;
  } else if (s == "3" || s == "label-given-degree") {
    out = WeightVariant::kLabelGivenDegree;
  } else {
    return false;
  }
  return true;
}

WeightBreakdown description_cost(const ClusterDescription& d,
                                 const ContextTables& tables, uint64_t m,
                                 size_t sigma, WeightVariant variant) {
  if (m == 0) throw std::invalid_argument("description_cost: m must be >= 1");
  const uint32_t k = tables.k();
  const long double lsigma = log2l(static_cast<long double>(sigma));
  const long double lm = log2l(static_cast<long double>(m));
  const long double reg_marker = regular_marker_bits(m);

  WeightBreakdown w;
  w.context_bits =
      log2l(static_cast<long double>(k) + 1) + d.context.size() * lsigma;
  w.count_bits = log2l(static_cast<long double>(2 * m));

  const DecodedShape shape = decode_shape(d);
  for (uint32_t i = 0; i < d.records.size(); ++i) {
    const ClusterRecord& r = d.records[i];
    const std::vector<label_t> ctx = record_context(d, shape, i, k);
    const std::string key = pack_context(ctx);
    if (r.is_port) {
      w.record_bits += lm;
      if (variant == WeightVariant::kLabelGivenDegree) {
        w.record_bits += lsigma;
      } else {
        w.record_bits -=
            log2l(static_cast<long double>(tables.p_label_given_ctx(key, r.label)));
      }
      continue;
    }
    w.record_bits += reg_marker;
    switch (variant) {
      case WeightVariant::kIndependent:
        w.record_bits -= log2l(
            static_cast<long double>(tables.p_label_given_ctx(key, r.label)));
        w.record_bits -= log2l(
            static_cast<long double>(tables.p_deg_given_ctx(key, r.deg)));
        break;
      case WeightVariant::kDegreeGivenLabel:
        w.record_bits -= log2l(
            static_cast<long double>(tables.p_label_given_ctx(key, r.label)));
        w.record_bits -= log2l(static_cast<long double>(
            tables.p_deg_given_ctx_label(key, r.label, r.deg)));
        break;
      case WeightVariant::kLabelGivenDegree:
        w.record_bits -= log2l(
            static_cast<long double>(tables.p_deg_given_ctx(key, r.deg)));
        w.record_bits -= log2l(static_cast<long double>(
            tables.p_label_given_ctx_deg(key, r.label, r.deg)));
        break;
    }
  }
  return w;
}

BoundReport bound_report(const LabeledTree& t, const ClusterStructure& s,
                         WeightVariant variant) {
  BoundReport rep;
  rep.variant = variant;
  rep.clusters = s.count;
  rep.nodes = t.size();
  for (const auto& p : s.ports) rep.ports += p.size();

  // |P| * H0(P) over the cluster-label string.
  std::vector<uint64_t> cnt(s.dict.size(), 0);
  for (uint32_t sym : s.symbol) ++cnt[sym];
  const long double total = static_cast<long double>(s.count);
  for (uint64_t c : cnt) {
    if (c > 0) {
      rep.string_h0 +=
          static_cast<long double>(c) * log2l(total / static_cast<long double>(c));
    }
  }

  // Oracle total: cost once per dictionary entry, weighted by multiplicity.
  const ContextTables tables = ContextTables::build(t, s.k);
  const size_t sigma = t.sigma();
  for (size_t id = 0; id < s.dict.size(); ++id) {
    if (cnt[id] == 0) continue;
    const WeightBreakdown w =
        description_cost(s.dict[id], tables, s.m, sigma, variant);
    rep.oracle_bits += static_cast<long double>(cnt[id]) * w.total();
  }

  // Closed form.
  const EntropyReport er = entropy_report(t, s.k);
  const long double lsigma = log2l(static_cast<long double>(sigma));
  const long double lm = log2l(static_cast<long double>(s.m));
  long double bound =
      static_cast<long double>(rep.clusters) *
          (static_cast<long double>(s.k) * lsigma +
           log2l(static_cast<long double>(s.k) + 1) +
           log2l(static_cast<long double>(2 * s.m))) +
      static_cast<long double>(rep.ports) * lm +
      static_cast<long double>(rep.nodes) * regular_marker_bits(s.m);
  switch (variant) {
    case WeightVariant::kIndependent:
      bound += static_cast<long double>(er.label_hk) +
               static_cast<long double>(er.tree_h);
      break;
    case WeightVariant::kDegreeGivenLabel:
      bound += static_cast<long double>(er.label_hk) +
               static_cast<long double>(er.mixed_tree_given_label);
      break;
    case WeightVariant::kLabelGivenDegree:
      bound += static_cast<long double>(er.tree_h) +
               static_cast<long double>(er.mixed_label_given_tree) +
               static_cast<long double>(rep.ports) * lsigma;
      break;
  }
  rep.explicit_bound = bound;
  return rep;
}

}  // namespace ltsx
