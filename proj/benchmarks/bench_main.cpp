// Microbenchmarks for the compressed tree: construction, the individual
// query families against both codecs, and full-corpus helpers.

#include <benchmark/benchmark.h>

#include <random>

#include "ltsx/cluster_structure.hpp"
#include "ltsx/clustering.hpp"
#include "ltsx/entropy.hpp"
#include "ltsx/succinct_tree.hpp"
#include "ltsx/tree_gen.hpp"

using namespace ltsx;

namespace {

LabeledTree bench_tree(size_t n) {
  return generate_tree(UniformSpec{n, 6}, 12345);
}

SuccinctTree bench_structure(size_t n, bool boosted) {
  SuccinctTree::Options opt;
  opt.k = 1;
  opt.boosted = boosted;
  return SuccinctTree::build(bench_tree(n), opt);
}

void BM_Build(benchmark::State& state) {
  LabeledTree t = bench_tree(size_t(state.range(0)));
  SuccinctTree::Options opt;
  opt.k = 1;
  opt.boosted = state.range(1) != 0;
  for (auto _ : state) {
    SuccinctTree st = SuccinctTree::build(t, opt);
    benchmark::DoNotOptimize(st.size());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Build)->Args({10000, 0})->Args({10000, 1})->Args({100000, 0})->Args({100000, 1});

void BM_Clustering(benchmark::State& state) {
  LabeledTree t = bench_tree(size_t(state.range(0)));
  for (auto _ : state) {
    Clustering c = cluster_greedy(t, 4);
    benchmark::DoNotOptimize(c.cluster_count());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Clustering)->Arg(10000)->Arg(100000);

void BM_EntropyReport(benchmark::State& state) {
  LabeledTree t = bench_tree(size_t(state.range(0)));
  for (auto _ : state) {
    EntropyReport r = entropy_report(t, 2);
    benchmark::DoNotOptimize(r.h0_labels);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_EntropyReport)->Arg(10000)->Arg(100000);

template <typename F>
void run_queries(benchmark::State& state, size_t n, bool boosted, F&& op) {
  SuccinctTree st = bench_structure(n, boosted);
  std::mt19937_64 rng(7);
  std::vector<node_t> nodes(1024);
  for (auto& v : nodes) v = node_t(rng() % st.size());
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(op(st, nodes[i++ & 1023]));
  }
  state.SetItemsProcessed(int64_t(state.iterations()));
}

void BM_Label(benchmark::State& state) {
  run_queries(state, 100000, state.range(0) != 0,
              [](const SuccinctTree& st, node_t v) { return st.label(v); });
}
BENCHMARK(BM_Label)->Arg(0)->Arg(1);

void BM_Parent(benchmark::State& state) {
  run_queries(state, 100000, false, [](const SuccinctTree& st, node_t v) {
    return st.parent(v).value_or(0);
  });
}
BENCHMARK(BM_Parent);

void BM_Degree(benchmark::State& state) {
  run_queries(state, 100000, false,
              [](const SuccinctTree& st, node_t v) { return st.degree(v); });
}
BENCHMARK(BM_Degree);

void BM_Depth(benchmark::State& state) {
  run_queries(state, 100000, false,
              [](const SuccinctTree& st, node_t v) { return st.depth(v); });
}
BENCHMARK(BM_Depth);

void BM_LevelAncestor(benchmark::State& state) {
  run_queries(state, 100000, false, [](const SuccinctTree& st, node_t v) {
    uint32_t d = st.depth(v);
    return st.level_ancestor(v, d / 2).value_or(0);
  });
}
BENCHMARK(BM_LevelAncestor);

void BM_Lca(benchmark::State& state) {
  SuccinctTree st = bench_structure(100000, false);
  std::mt19937_64 rng(7);
  std::vector<std::pair<node_t, node_t>> pairs(1024);
  for (auto& p : pairs)
    p = {node_t(rng() % st.size()), node_t(rng() % st.size())};
  size_t i = 0;
  for (auto _ : state) {
    auto [u, v] = pairs[i++ & 1023];
    benchmark::DoNotOptimize(st.lca(u, v));
  }
  state.SetItemsProcessed(int64_t(state.iterations()));
}
BENCHMARK(BM_Lca);

void BM_DepthLabel(benchmark::State& state) {
  run_queries(state, 100000, false, [](const SuccinctTree& st, node_t v) {
    return st.depth_label(v, 1);
  });
}
BENCHMARK(BM_DepthLabel);

void BM_DecodeFull(benchmark::State& state) {
  SuccinctTree st = bench_structure(size_t(state.range(0)), false);
  for (auto _ : state) {
    LabeledTree t = st.decode_full();
    benchmark::DoNotOptimize(t.size());
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_DecodeFull)->Arg(10000)->Arg(100000);

void BM_SerializeLoad(benchmark::State& state) {
  SuccinctTree st = bench_structure(100000, true);
  std::vector<uint8_t> bytes = st.serialize();
  for (auto _ : state) {
    SuccinctTree back = SuccinctTree::load(bytes);
    benchmark::DoNotOptimize(back.size());
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(bytes.size()));
}
BENCHMARK(BM_SerializeLoad);

}  // namespace

BENCHMARK_MAIN();
