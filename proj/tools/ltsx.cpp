// Command-line front end: build, query, verify, entropy, decode, bench.
// Exit codes: 0 ok, 1 check or processing failure, 2 usage.

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltsx/cluster_bounds.hpp"
#include "ltsx/cluster_structure.hpp"
#include "ltsx/clustering.hpp"
#include "ltsx/container.hpp"
#include "ltsx/entropy.hpp"
#include "ltsx/labeled_tree.hpp"
#include "ltsx/ltree_io.hpp"
#include "ltsx/naive_oracle.hpp"
#include "ltsx/succinct_tree.hpp"

using namespace ltsx;

namespace {

struct Config {
  std::string input;
  std::string format = "ltree";
  uint32_t k = 0;
  uint64_t m = 0;  // 0 = auto
  std::string codec = "plain";
  uint32_t d = 0;  // 0 = auto
  uint32_t sigma_small = 16;
  uint64_t seed = 1;
  std::string output;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

LabeledTree load_tree(const Config& cfg) {
  std::string text = read_text(cfg.input);
  if (cfg.format == "xml") return parse_xml_skeleton(text);
  return parse_ltree(text);
}

SuccinctTree::Options options_of(const Config& cfg) {
  SuccinctTree::Options opt;
  opt.k = cfg.k;
  opt.m = cfg.m;
  opt.boosted = cfg.codec == "boosted";
  opt.d = cfg.d;
  opt.sigma_small = cfg.sigma_small;
  return opt;
}

void add_common(CLI::App* app, Config& cfg, bool with_output) {
  app->add_option("-i,--input", cfg.input, "input tree file")->required();
  app->add_option("-f,--format", cfg.format, "input format")
      ->check(CLI::IsMember({"ltree", "xml"}));
  app->add_option("-k,--context", cfg.k, "context length k");
  app->add_option("-m,--cluster", cfg.m, "cluster parameter m (0 = auto)");
  app->add_option("-c,--codec", cfg.codec, "cluster-label codec")
      ->check(CLI::IsMember({"plain", "boosted"}));
  app->add_option("-d,--period", cfg.d, "context sampling period (0 = auto)");
  app->add_option("--sigma-small", cfg.sigma_small,
                  "alphabet bound for label-restricted operations");
  app->add_option("--seed", cfg.seed, "seed for sampled checks");
  if (with_output) app->add_option("-o,--output", cfg.output, "output path");
}

void print_size_report(const SuccinctTree& st, bool csv) {
  SizeReport rep = st.size_report();
  EntropyReport ent;
  bool have_ent = false;
  try {
    LabeledTree t = st.decode_full();
    ent = entropy_report(t, st.k());
    have_ent = true;
  } catch (const std::exception&) {
  }
  if (csv) {
    std::printf("section,bytes\n");
    for (const auto& [tag, bytes] : rep.stored_bytes)
      std::printf("%s,%" PRIu64 "\n", tag.c_str(), bytes);
    std::printf("total,%" PRIu64 "\n", rep.file_bytes);
    return;
  }
  std::printf("{\n");
  std::printf("  \"nodes\": %" PRIu64 ",\n", rep.nodes);
  std::printf("  \"sigma\": %" PRIu64 ",\n", rep.sigma);
  std::printf("  \"clusters\": %" PRIu64 ",\n", rep.clusters);
  std::printf("  \"dict_entries\": %" PRIu64 ",\n", rep.dict_entries);
  std::printf("  \"file_bytes\": %" PRIu64 ",\n", rep.file_bytes);
  std::printf("  \"stored_bytes\": {");
  for (size_t i = 0; i < rep.stored_bytes.size(); ++i)
    std::printf("%s\"%s\": %" PRIu64, i ? ", " : "",
                rep.stored_bytes[i].first.c_str(), rep.stored_bytes[i].second);
  std::printf("},\n");
  std::printf("  \"derived_bits\": {");
  for (size_t i = 0; i < rep.derived_bits.size(); ++i)
    std::printf("%s\"%s\": %" PRIu64, i ? ", " : "",
                rep.derived_bits[i].first.c_str(), rep.derived_bits[i].second);
  std::printf("},\n");
  std::printf("  \"derived_total_bits\": %" PRIu64, rep.derived_total_bits);
  if (have_ent) {
    std::printf(",\n  \"entropy_bits\": {\"h0\": %.4f, \"hk_labels\": %.4f, "
                "\"h_tree\": %.4f, \"hk_tree_given_labels\": %.4f, "
                "\"hk_labels_given_tree\": %.4f}",
                (double)ent.h0_labels, (double)ent.label_hk, (double)ent.tree_h,
                (double)ent.mixed_tree_given_label,
                (double)ent.mixed_label_given_tree);
  }
  std::printf("\n}\n");
}

int cmd_build(const Config& cfg, bool csv, bool dump_clusters) {
  LabeledTree t = load_tree(cfg);
  SuccinctTree st = SuccinctTree::build(t, options_of(cfg));
  if (!cfg.output.empty()) write_file_bytes(cfg.output, st.serialize());
  print_size_report(st, csv);
  if (dump_clusters) {
    std::printf("cluster,symbol,first,size,fnv1a\n");
    for (size_t c = 0; c < st.cluster_count(); ++c) {
      uint32_t s = st.symbol_at(c);
      std::printf("%zu,%u,%u,%" PRIu64 ",%016" PRIx64 "\n", c, s,
                  st.cluster_first(c), st.cluster_size(c),
                  st.dictionary()[s].fnv1a());
    }
  }
  return 0;
}

int cmd_decode(const std::string& structure, const std::string& output) {
  SuccinctTree st = SuccinctTree::load(read_file_bytes(structure));
  std::string text = serialize_ltree(st.decode_full());
  if (output.empty()) {
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + output);
    out << text << "\n";
  }
  return 0;
}

void print_node(const std::optional<node_t>& v) {
  if (v)
    std::printf("%u\n", *v);
  else
    std::printf("none\n");
}

int cmd_query(const std::string& structure, const std::string& op,
              const std::vector<uint64_t>& args) {
  SuccinctTree st = SuccinctTree::load(read_file_bytes(structure));
  auto need = [&](size_t c) {
    if (args.size() != c)
      throw CLI::ValidationError("query", op + " expects " +
                                              std::to_string(c) + " argument(s)");
  };
  auto nd = [&](size_t i) { return static_cast<node_t>(args[i]); };
  auto u32 = [&](size_t i) { return static_cast<uint32_t>(args[i]); };
  if (op == "size") {
    need(0);
    std::printf("%zu\n", st.size());
  } else if (op == "label") {
    need(1);
    std::printf("%u\n", st.label(nd(0)));
  } else if (op == "label-token") {
    need(1);
    std::printf("%s\n", st.label_token(nd(0)).c_str());
  } else if (op == "parent") {
    need(1);
    print_node(st.parent(nd(0)));
  } else if (op == "first-child") {
    need(1);
    print_node(st.first_child(nd(0)));
  } else if (op == "next-sibling") {
    need(1);
    print_node(st.next_sibling(nd(0)));
  } else if (op == "degree") {
    need(1);
    std::printf("%u\n", st.degree(nd(0)));
  } else if (op == "child") {
    need(2);
    std::printf("%u\n", st.child(nd(0), u32(1)));
  } else if (op == "childrank") {
    need(1);
    std::printf("%u\n", st.childrank(nd(0)));
  } else if (op == "depth") {
    need(1);
    std::printf("%u\n", st.depth(nd(0)));
  } else if (op == "level-ancestor") {
    need(2);
    print_node(st.level_ancestor(nd(0), u32(1)));
  } else if (op == "lca") {
    need(2);
    std::printf("%u\n", st.lca(nd(0), nd(1)));
  } else if (op == "preorder-rank") {
    need(1);
    std::printf("%u\n", st.preorder_rank(nd(0)));
  } else if (op == "preorder-select") {
    need(1);
    std::printf("%u\n", st.preorder_select(nd(0)));
  } else if (op == "childrank-label") {
    need(2);
    std::printf("%u\n", st.childrank_label(nd(0), u32(1)));
  } else if (op == "childselect-label") {
    need(3);
    print_node(st.childselect_label(nd(0), u32(1), u32(2)));
  } else if (op == "depth-label") {
    need(2);
    std::printf("%u\n", st.depth_label(nd(0), u32(1)));
  } else if (op == "level-ancestor-label") {
    need(3);
    print_node(st.level_ancestor_label(nd(0), u32(1), u32(2)));
  } else {
    throw CLI::ValidationError("query", "unknown operation '" + op + "'");
  }
  return 0;
}

int cmd_entropy(const Config& cfg, uint32_t kmax) {
  LabeledTree t = load_tree(cfg);
  std::printf("k,h0,hk_labels,h_tree,hk_tree_given_labels,hk_labels_given_tree\n");
  for (uint32_t k = 0; k <= kmax; ++k) {
    EntropyReport r = entropy_report(t, k);
    std::printf("%u,%.6f,%.6f,%.6f,%.6f,%.6f\n", k, (double)r.h0_labels,
                (double)r.label_hk, (double)r.tree_h,
                (double)r.mixed_tree_given_label,
                (double)r.mixed_label_given_tree);
  }
  return 0;
}

struct Verifier {
  int failures = 0;
  void check(bool ok, const std::string& name, const std::string& detail = "") {
    if (ok) {
      std::printf("ok   %s\n", name.c_str());
    } else {
      ++failures;
      std::printf("FAIL %s%s%s\n", name.c_str(), detail.empty() ? "" : ": ",
                  detail.c_str());
    }
  }
};

template <typename F>
bool equal_everywhere(size_t n, F&& f) {
  for (node_t v = 0; v < n; ++v)
    if (!f(v)) return false;
  return true;
}

int cmd_verify(const Config& cfg) {
  LabeledTree t = load_tree(cfg);
  Verifier vf;
  {
    bool ok = true;
    std::string why;
    try {
      t.check();
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    vf.check(ok, "tree invariants", why);
  }

  SuccinctTree::Options opt = options_of(cfg);
  SuccinctTree st = SuccinctTree::build(t, opt);
  NaiveOracle nv(t);
  const size_t n = t.size();
  std::mt19937_64 rng(cfg.seed);
  auto rnd = [&](uint64_t hi) { return hi ? rng() % hi : 0; };

  // Clustering conditions on this input, for the m actually used.
  {
    Clustering c = cluster_greedy(t, st.m());
    auto viol = validate_clustering(t, c);
    vf.check(viol.empty(), "clustering conditions",
             viol.empty() ? "" : viol.front());
  }

  // Entropy inequalities at this k.
  {
    EntropyReport r = entropy_report(t, cfg.k);
    vf.check(r.mixed_tree_given_label <= r.tree_h + 1e-9L,
             "Hk(T|L) <= H(T)");
    vf.check(r.mixed_label_given_tree <= r.label_hk + 1e-9L,
             "Hk(L|T) <= Hk(L)");
  }

  // Dictionary weight bounds (skipped for m = 1, where the per-record
  // charge for regular nodes diverges).
  if (st.m() >= 2) {
    Clustering c = cluster_greedy(t, st.m());
    ClusterStructure cs = build_cluster_structure(t, c, cfg.k);
    for (WeightVariant wv : {WeightVariant::kIndependent,
                             WeightVariant::kDegreeGivenLabel,
                             WeightVariant::kLabelGivenDegree}) {
      BoundReport br = bound_report(t, cs, wv);
      std::string nm = "weights variant " + std::to_string(int(wv));
      vf.check(br.string_h0 <= br.oracle_bits + 1e-6L, nm + ": H0 <= oracle");
      vf.check(br.oracle_bits <= br.explicit_bound + 1e-6L,
               nm + ": oracle <= explicit bound");
    }
  }

  // Codec payload accounting.
  {
    std::vector<uint64_t> counts(st.dict_size(), 0);
    for (size_t i = 0; i < st.cluster_count(); ++i) ++counts[st.symbol_at(i)];
    long double h0 = h0_total(counts);
    if (!st.boosted()) {
      vf.check((long double)st.plain_codec().payload().size() <=
                   h0 + (long double)st.cluster_count() + 1e-6L,
               "plain payload <= |P|H0(P) + |P|");
    } else {
      const auto& bc = st.boosted_codec();
      std::vector<std::vector<uint64_t>> per_class(bc.class_count());
      for (auto& pc : per_class) pc.assign(st.dict_size(), 0);
      for (size_t i = 0; i < st.cluster_count(); ++i)
        ++per_class[bc.class_of(i)][bc.at(i)];
      long double bound = 0;
      for (const auto& pc : per_class) bound += h0_total(pc);
      vf.check((long double)bc.payload().size() <=
                   bound + (long double)st.cluster_count() + 1e-6L,
               "boosted payload <= sum |P_K|H0(P_K) + |P|");
      vf.check(bc.class_count() <= st.cluster_count() / bc.sampling_period() + 1,
               "class count <= |T'|/d + 1");
    }
  }

  // Query equivalence against the brute-force oracle.
  vf.check(equal_everywhere(n, [&](node_t v) { return st.label(v) == nv.label(v); }),
           "label");
  vf.check(equal_everywhere(n, [&](node_t v) { return st.parent(v) == nv.parent(v); }),
           "parent");
  vf.check(equal_everywhere(
               n, [&](node_t v) { return st.first_child(v) == nv.first_child(v); }),
           "first_child");
  vf.check(equal_everywhere(
               n, [&](node_t v) { return st.next_sibling(v) == nv.next_sibling(v); }),
           "next_sibling");
  vf.check(equal_everywhere(n, [&](node_t v) { return st.degree(v) == t.degree(v); }),
           "degree");
  vf.check(
      equal_everywhere(n, [&](node_t v) { return st.childrank(v) == nv.childrank(v); }),
      "childrank");
  vf.check(equal_everywhere(n, [&](node_t v) { return st.depth(v) == nv.depth(v); }),
           "depth");
  {
    bool ok = true;
    for (size_t q = 0; q < 4 * n + 64 && ok; ++q) {
      node_t v = (node_t)rnd(n);
      uint32_t i = (uint32_t)rnd(nv.depth(v) + 2);
      ok = st.level_ancestor(v, i) == nv.level_ancestor(v, i);
    }
    vf.check(ok, "level_ancestor (sampled)");
  }
  {
    bool ok = true;
    for (size_t q = 0; q < 4 * n + 64 && ok; ++q) {
      node_t v = (node_t)rnd(n);
      if (t.degree(v) == 0) continue;
      uint32_t i = (uint32_t)rnd(t.degree(v));
      ok = st.child(v, i) == nv.child(v, i);
    }
    vf.check(ok, "child (sampled)");
  }
  {
    bool ok = true;
    for (size_t q = 0; q < 4 * n + 64 && ok; ++q) {
      node_t u = (node_t)rnd(n), v = (node_t)rnd(n);
      ok = st.lca(u, v) == nv.lca(u, v);
    }
    vf.check(ok, "lca (sampled)");
  }
  if (st.has_label_ops()) {
    bool ok = true;
    for (size_t q = 0; q < 4 * n + 64 && ok; ++q) {
      node_t v = (node_t)rnd(n);
      label_t a = (label_t)rnd(t.sigma());
      uint32_t i = 1 + (uint32_t)rnd(4);
      ok = st.childrank_label(v, a) == nv.childrank_label(v, a) &&
           st.depth_label(v, a) == nv.depth_label(v, a) &&
           st.childselect_label(v, i, a) == nv.childselect_label(v, i, a) &&
           st.level_ancestor_label(v, i, a) == nv.level_ancestor_label(v, i, a);
    }
    vf.check(ok, "label-restricted queries (sampled)");
  }

  // Decode identity and serialization round trip.
  vf.check(st.decode_full().equal(t), "decode_full identity");
  {
    SuccinctTree st2 = SuccinctTree::load(st.serialize());
    bool ok = st2.size() == st.size();
    for (size_t q = 0; q < 2 * n + 32 && ok; ++q) {
      node_t v = (node_t)rnd(n);
      ok = st2.label(v) == nv.label(v) && st2.parent(v) == nv.parent(v) &&
           st2.depth(v) == nv.depth(v);
    }
    vf.check(ok && st2.decode_full().equal(t), "serialize/load round trip");
  }

  std::printf("%s (%d failure%s)\n", vf.failures ? "VERIFY FAILED" : "verify passed",
              vf.failures, vf.failures == 1 ? "" : "s");
  return vf.failures ? 1 : 0;
}

int cmd_bench(const Config& cfg, uint64_t iters) {
  LabeledTree t = load_tree(cfg);
  SuccinctTree st = SuccinctTree::build(t, options_of(cfg));
  const size_t n = t.size();
  std::mt19937_64 rng(cfg.seed);
  std::vector<node_t> vs(1024);
  for (auto& v : vs) v = (node_t)(rng() % n);
  volatile uint64_t sink = 0;

  auto time_op = [&](const char* name, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    for (uint64_t i = 0; i < iters; ++i) sink = sink + fn(vs[i & 1023]);
    auto t1 = std::chrono::steady_clock::now();
    double ns =
        std::chrono::duration<double, std::nano>(t1 - t0).count() / double(iters);
    std::printf("%s,%" PRIu64 ",%.1f\n", name, iters, ns);
  };

  std::printf("op,iters,ns_per_op\n");
  time_op("label", [&](node_t v) { return (uint64_t)st.label(v); });
  time_op("parent", [&](node_t v) { return (uint64_t)st.parent(v).value_or(0); });
  time_op("first_child",
          [&](node_t v) { return (uint64_t)st.first_child(v).value_or(0); });
  time_op("next_sibling",
          [&](node_t v) { return (uint64_t)st.next_sibling(v).value_or(0); });
  time_op("degree", [&](node_t v) { return (uint64_t)st.degree(v); });
  time_op("childrank", [&](node_t v) { return (uint64_t)st.childrank(v); });
  time_op("depth", [&](node_t v) { return (uint64_t)st.depth(v); });
  time_op("level_ancestor", [&](node_t v) {
    return (uint64_t)st.level_ancestor(v, st.depth(v) / 2).value_or(0);
  });
  time_op("lca", [&](node_t v) { return (uint64_t)st.lca(v, vs[(v + 1) & 1023]); });
  if (st.has_label_ops()) {
    time_op("depth_label",
            [&](node_t v) { return (uint64_t)st.depth_label(v, v % t.sigma()); });
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    LabeledTree back = st.decode_full();
    auto t1 = std::chrono::steady_clock::now();
    sink = sink + back.size();
    std::printf("decode_full,1,%.1f\n",
                std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  (void)sink;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-bounded compressed labeled trees with navigation"};
  app.require_subcommand(1);

  Config cfg;
  bool csv = false, dump_clusters = false;
  uint32_t kmax = 2;
  uint64_t iters = 200000;
  std::string structure, output, op;
  std::vector<uint64_t> qargs;

  CLI::App* build = app.add_subcommand("build", "compress a tree to a container");
  add_common(build, cfg, true);
  build->add_flag("--csv", csv, "emit the size report as CSV");
  build->add_flag("--dump-clusters", dump_clusters,
                  "list clusters with dictionary hashes");

  CLI::App* query = app.add_subcommand("query", "run one query on a container");
  query->add_option("-s,--structure", structure, "container file")->required();
  query->add_option("op", op, "operation name")->required();
  query->add_option("args", qargs, "operation arguments");

  CLI::App* verify = app.add_subcommand("verify", "full self-check on an input tree");
  add_common(verify, cfg, false);

  CLI::App* entropy = app.add_subcommand("entropy", "entropy measures as CSV");
  entropy->add_option("-i,--input", cfg.input, "input tree file")->required();
  entropy->add_option("-f,--format", cfg.format, "input format")
      ->check(CLI::IsMember({"ltree", "xml"}));
  entropy->add_option("--kmax", kmax, "largest context length");

  CLI::App* decode = app.add_subcommand("decode", "decode a container back to text");
  decode->add_option("-s,--structure", structure, "container file")->required();
  decode->add_option("-o,--output", output, "output path (default stdout)");

  CLI::App* bench = app.add_subcommand("bench", "query timing table");
  add_common(bench, cfg, false);
  bench->add_option("--iters", iters, "iterations per operation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(cfg, csv, dump_clusters);
    if (query->parsed()) return cmd_query(structure, op, qargs);
    if (verify->parsed()) return cmd_verify(cfg);
    if (entropy->parsed()) return cmd_entropy(cfg, kmax);
    if (decode->parsed()) return cmd_decode(structure, output);
    if (bench->parsed()) return cmd_bench(cfg, iters);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
