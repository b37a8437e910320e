#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "corpus.hpp"
#include "ltsx/cluster_bounds.hpp"
#include "ltsx/cluster_structure.hpp"
#include "ltsx/clustering.hpp"
#include "ltsx/entropy.hpp"
#include "ltsx/ltree_io.hpp"
#include "ltsx/tree_gen.hpp"

using namespace ltsx;

namespace {

LabeledTree worked_tree() {
  // One root with a small two-level core {b, a, c, a}; every other child is a
  // three-node chain, so at m = 3 the chains shed one cluster each and the
  // core packs into a single four-node cluster below the root.
  return parse_ltree(
      "(a (b (p (p (p))) (p (p (p))) (p (p (p))))"
      "   (a (c (p (p (p))) (p (p (p))))"
      "      (a (p (p (p))) (p (p (p))))))");
}

void check_conditions(const LabeledTree& t, uint64_t m) {
  Clustering c = cluster_greedy(t, m);
  auto viol = validate_clustering(t, c);
  CAPTURE(m);
  if (!viol.empty()) CAPTURE(viol.front());
  REQUIRE(viol.empty());

  double n = double(t.size());
  double count = double(c.cluster_count());
  CHECK(count >= n / (2.0 * double(m)) - 1.0);
  CHECK(count <= 2.0 * n / double(m) + 1.0);

  std::vector<uint64_t> size(c.cluster_count(), 0);
  for (node_t v = 0; v < t.size(); ++v) size[c.cluster_of[v]]++;
  for (uint64_t s : size) {
    CHECK(s >= 1);
    CHECK(s <= 2 * m - 1);
  }

  // Port/regular dichotomy: a port keeps none of its children, a regular
  // node keeps all of them.
  for (node_t v = 0; v < t.size(); ++v) {
    uint32_t kept = 0;
    for (node_t ch = t.first_child(v); ch != NO_NODE; ch = t.next_sibling(ch))
      if (c.cluster_of[ch] == c.cluster_of[v]) ++kept;
    if (c.is_port[v]) {
      CHECK(t.degree(v) > 0);
      CHECK(kept == 0);
    } else {
      CHECK(kept == t.degree(v));
    }
  }
}

}  // namespace

TEST_CASE("ten node path at m = 3 emits tail groups first") {
  LabeledTree t = parse_ltree("(a (a (a (a (a (a (a (a (a (a))))))))))");
  Clustering c = cluster_greedy(t, 3);
  REQUIRE(c.cluster_count() == 4);
  CHECK(c.roots[0] == std::vector<node_t>{7});
  CHECK(c.roots[1] == std::vector<node_t>{4});
  CHECK(c.roots[2] == std::vector<node_t>{1});
  CHECK(c.roots[3] == std::vector<node_t>{0});
  for (node_t v : {7, 8, 9}) CHECK(c.cluster_of[v] == 0);
  for (node_t v : {4, 5, 6}) CHECK(c.cluster_of[v] == 1);
  for (node_t v : {1, 2, 3}) CHECK(c.cluster_of[v] == 2);
  CHECK(c.cluster_of[0] == 3);
}

TEST_CASE("degenerate grouping parameters") {
  LabeledTree t = generate_tree(UniformSpec{90, 3}, 4);
  Clustering ones = cluster_greedy(t, 1);
  CHECK(ones.cluster_count() == t.size());
  for (auto& r : ones.roots) CHECK(r.size() == 1);

  Clustering whole = cluster_greedy(t, t.size());
  CHECK(whole.cluster_count() == 1);
  CHECK(whole.roots[0] == std::vector<node_t>{0});

  CHECK_THROWS_AS(cluster_greedy(t, 0), std::invalid_argument);
}

TEST_CASE("clustering conditions on exhaustive small shapes") {
  for (uint32_t n = 1; n <= 7; ++n)
    for (const auto& p : testsup::all_shapes(n)) {
      LabeledTree t = testsup::label_shape(p, 2, testsup::Labeling::kMixed);
      for (uint64_t m : {1ull, 2ull, 3ull, 4ull, 8ull}) check_conditions(t, m);
    }
}

TEST_CASE("clustering conditions on random trees") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    size_t n = 1 + (seed * 397) % 4000;
    LabeledTree t = generate_tree(UniformSpec{n, 1 + uint32_t(seed % 5)}, seed);
    for (uint64_t m : {1ull, 2ull, 3ull, 4ull, 8ull, 100ull})
      check_conditions(t, m);
  }
  check_conditions(generate_tree(testsup::label_determines_degree(2500), 7), 4);
}

TEST_CASE("worked cluster description and port entries") {
  LabeledTree t = worked_tree();
  REQUIRE(t.size() == 26);
  Clustering c = cluster_greedy(t, 3);
  ClusterStructure cs = build_cluster_structure(t, c, 1);

  REQUIRE(cs.count == 9);
  // Preorder of the cluster tree starts at the root cluster, then the core.
  CHECK(cs.members[0] == std::vector<node_t>{0});
  CHECK(cs.members[1] == std::vector<node_t>{1, 11, 12, 19});
  CHECK(cs.roots[1] == std::vector<node_t>{1, 11});
  CHECK(cs.ports[1] == std::vector<node_t>{1, 12, 19});
  CHECK(cs.entries[1] == std::vector<uint32_t>{3, 2, 2});
  CHECK(cs.entries[0] == std::vector<uint32_t>{1});

  // Alphabet ids by first appearance: a=0, b=1, p=2, c=3.
  const ClusterDescription& d = cs.dict[cs.symbol[1]];
  CHECK(d.context == std::vector<label_t>{0});
  REQUIRE(d.records.size() == 4);
  CHECK(d.records[0].is_port == 1);
  CHECK(d.records[0].label == 1);
  CHECK(d.records[1].is_port == 0);
  CHECK(d.records[1].label == 0);
  CHECK(d.records[1].deg == 2);
  CHECK(d.records[2].is_port == 1);
  CHECK(d.records[2].label == 3);
  CHECK(d.records[3].is_port == 1);
  CHECK(d.records[3].label == 0);

  DecodedShape sh = decode_shape(d);
  CHECK(sh.roots == std::vector<uint32_t>{0, 1});
  CHECK(sh.ports == std::vector<uint32_t>{0, 2, 3});
  CHECK(sh.parent ==
        std::vector<uint32_t>{UINT32_MAX, UINT32_MAX, 1, 1});
  CHECK(sh.tree_depth == std::vector<uint32_t>{0, 0, 1, 1});

  // Contexts as seen from inside the description.
  CHECK(record_context(d, sh, 0, 1) == std::vector<label_t>{0});
  CHECK(record_context(d, sh, 2, 1) == std::vector<label_t>{0});
  CHECK(record_context(d, sh, 2, 2) == std::vector<label_t>{0, 0});

  // The root cluster holds the lone port the core hangs from.
  CHECK(cs.attach_port[1] == 0);
  CHECK(cs.edge_weight[1] == 1);
  CHECK(cs.attach_port[0] == NO_NODE);
  CHECK(cs.edge_weight[0] == 0);
}

TEST_CASE("descriptions survive their canonical byte image") {
  LabeledTree t = generate_tree(UniformSpec{700, 4}, 21);
  Clustering c = cluster_greedy(t, 3);
  ClusterStructure cs = build_cluster_structure(t, c, 2);
  for (const ClusterDescription& d : cs.dict) {
    std::vector<uint8_t> bytes = d.canonical_bytes();
    size_t used = 0;
    ClusterDescription back =
        ClusterDescription::from_canonical_bytes(bytes.data(), bytes.size(), used);
    CHECK(used == bytes.size());
    CHECK(back.canonical_bytes() == bytes);
    CHECK(back.fnv1a() == d.fnv1a());
    CHECK(back.context == d.context);
    REQUIRE(back.records.size() == d.records.size());
    for (size_t i = 0; i < d.records.size(); ++i) {
      CHECK(back.records[i].is_port == d.records[i].is_port);
      CHECK(back.records[i].label == d.records[i].label);
      if (!d.records[i].is_port) CHECK(back.records[i].deg == d.records[i].deg);
    }
  }
  CHECK_THROWS_AS(
      [&] {
        size_t used = 0;
        std::vector<uint8_t> bytes = cs.dict[0].canonical_bytes();
        bytes.pop_back();
        return ClusterDescription::from_canonical_bytes(bytes.data(),
                                                        bytes.size(), used);
      }(),
      std::invalid_argument);
}

TEST_CASE("structure is consistent and reassembles the input") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 18; ++round) {
    size_t n = 1 + rng() % 1500;
    uint32_t sigma = 1 + rng() % 6;
    uint64_t m = 1 + rng() % 9;
    uint32_t k = rng() % 3;
    LabeledTree t = generate_tree(UniformSpec{n, sigma}, rng());
    Clustering c = cluster_greedy(t, m);
    ClusterStructure cs = build_cluster_structure(t, c, k);

    CHECK(cs.count == c.cluster_count());
    // Cluster-tree preorder ids ascend with the first original root.
    for (size_t v = 1; v < cs.count; ++v)
      CHECK(cs.roots[v - 1].front() < cs.roots[v].front());
    // Symbols are dictionary ids in first-appearance order.
    uint32_t seen = 0;
    for (uint32_t s : cs.symbol) {
      CHECK(s <= seen);
      if (s == seen) ++seen;
    }
    CHECK(seen == cs.dict.size());
    // Every port owns at least one attached cluster; portless clusters
    // carry the single placeholder entry.
    for (size_t v = 0; v < cs.count; ++v) {
      if (cs.ports[v].empty()) {
        CHECK(cs.entries[v] == std::vector<uint32_t>{0});
      } else {
        REQUIRE(cs.entries[v].size() == cs.ports[v].size());
        for (uint32_t e : cs.entries[v]) CHECK(e >= 1);
      }
      uint64_t attached = 0;
      for (uint32_t e : cs.entries[v]) attached += e;
      CHECK(attached == cs.children[v].size());
    }

    LabeledTree back =
        reassemble_tree(t.alphabet(), cs.dict, cs.symbol, cs.children, cs.entries);
    CHECK(back.equal(t));
  }
}

TEST_CASE("weight oracle sits between the string entropy and the bound") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 25; ++round) {
    size_t n = 2 + rng() % 2500;
    uint32_t sigma = 1 + rng() % 7;
    uint64_t m = 2 + rng() % 7;
    uint32_t k = rng() % 3;
    LabeledTree t = round % 5 == 0
                        ? generate_tree(testsup::label_determines_degree(n), rng())
                        : generate_tree(UniformSpec{n, sigma}, rng());
    Clustering c = cluster_greedy(t, m);
    ClusterStructure cs = build_cluster_structure(t, c, k);
    std::vector<uint32_t> syms(cs.symbol.begin(), cs.symbol.end());
    long double h0 = h0_total_of(syms);
    for (WeightVariant wv :
         {WeightVariant::kIndependent, WeightVariant::kDegreeGivenLabel,
          WeightVariant::kLabelGivenDegree}) {
      BoundReport br = bound_report(t, cs, wv);
      CAPTURE(n);
      CAPTURE(m);
      CAPTURE(k);
      CAPTURE(int(wv));
      CHECK(br.nodes == t.size());
      CHECK(br.clusters == cs.count);
      CHECK(std::abs(double(br.string_h0 - h0)) < 1e-6);
      CHECK(br.string_h0 <= br.oracle_bits + 1e-6L);
      CHECK(br.oracle_bits <= br.explicit_bound + 1e-6L);
    }
  }
}

TEST_CASE("grouping parameter one makes the oracle diverge harmlessly") {
  LabeledTree t = generate_tree(UniformSpec{40, 2}, 2);
  Clustering c = cluster_greedy(t, 1);
  ClusterStructure cs = build_cluster_structure(t, c, 1);
  BoundReport br = bound_report(t, cs, WeightVariant::kIndependent);
  CHECK(std::isinf(double(br.oracle_bits)));
  CHECK(br.string_h0 <= br.oracle_bits);
}

TEST_CASE("weight variants parse and print") {
  WeightVariant wv;
  CHECK(parse_weight_variant("1", wv));
  CHECK(wv == WeightVariant::kIndependent);
  CHECK(parse_weight_variant("2", wv));
  CHECK(wv == WeightVariant::kDegreeGivenLabel);
  CHECK(parse_weight_variant("3", wv));
  CHECK(wv == WeightVariant::kLabelGivenDegree);
  CHECK_FALSE(parse_weight_variant("4", wv));
  CHECK(std::string(to_string(WeightVariant::kIndependent)).size() > 0);
}
