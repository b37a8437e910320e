#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "ltsx/entropy.hpp"
#include "ltsx/huffman.hpp"
#include "ltsx/label_codec.hpp"

using namespace ltsx;

namespace {

std::vector<uint32_t> random_symbols(std::mt19937_64& rng, size_t n,
                                     uint32_t alphabet, bool skew) {
  std::vector<uint32_t> s(n);
  for (auto& x : s) {
    uint32_t r = rng() % alphabet;
    if (skew && (rng() & 3)) r = r % (1 + alphabet / 4);
    x = r;
  }
  return s;
}

std::vector<uint64_t> tally(const std::vector<uint32_t>& symbols,
                            uint32_t alphabet) {
  std::vector<uint64_t> c(alphabet, 0);
  for (uint32_t s : symbols) ++c[s];
  return c;
}

}  // namespace

TEST_CASE("huffman codes are canonical, complete and decodable") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 30; ++round) {
    uint32_t alphabet = 1 + rng() % 40;
    auto symbols = random_symbols(rng, 1 + rng() % 2000, alphabet, round & 1);
    auto counts = tally(symbols, alphabet);
    Huffman h = Huffman::build(counts);
    REQUIRE(h.symbols() == alphabet);
    CHECK(h.max_length() < 64);

    // Deterministic and canonical: rebuilding from scratch or from the
    // stored lengths gives identical codes.
    Huffman again = Huffman::build(counts);
    Huffman from_len = Huffman::from_lengths(h.lengths());
    for (uint32_t s = 0; s < alphabet; ++s) {
      CHECK(h.length(s) == again.length(s));
      CHECK(h.code(s) == again.code(s));
      CHECK(h.length(s) == from_len.length(s));
      CHECK(h.code(s) == from_len.code(s));
      if (counts[s] == 0) CHECK(h.length(s) == 0);
      if (counts[s] > 0) CHECK(h.length(s) >= 1);
    }

    // Kraft equality over the coded symbols (completeness).
    long double kraft = 0;
    size_t active = 0;
    for (uint32_t s = 0; s < alphabet; ++s)
      if (h.length(s)) {
        kraft += std::pow(2.0L, -(long double)h.length(s));
        ++active;
      }
    if (active >= 2) CHECK(std::abs(double(kraft - 1.0L)) < 1e-12);
    if (active == 1) CHECK(h.max_length() == 1);

    // Optimal-prefix-code redundancy: within one bit per symbol of H0.
    uint64_t total = symbols.size();
    uint64_t cost = h.cost_bits(counts);
    uint64_t direct = 0;
    for (uint32_t s : symbols) direct += h.length(s);
    CHECK(cost == direct);
    CHECK((long double)cost <= h0_total(counts) + (long double)total + 1e-6L);

    // Stream round trip.
    BitBuffer buf;
    std::vector<size_t> starts;
    for (uint32_t s : symbols) {
      starts.push_back(buf.size());
      h.append(buf, s);
    }
    BitVector bits(buf);
    for (size_t i = 0; i < symbols.size(); ++i)
      CHECK(h.decode(bits, starts[i]) == symbols[i]);
  }
}

TEST_CASE("plain codec meets the per-symbol bound and round-trips") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 20; ++round) {
    uint32_t alphabet = 1 + rng() % 25;
    auto symbols = random_symbols(rng, 1 + rng() % 3000, alphabet, true);
    PlainLabelCodec c = PlainLabelCodec::build(symbols, alphabet);
    REQUIRE(c.size() == symbols.size());
    for (size_t i = 0; i < symbols.size(); ++i) CHECK(c.at(i) == symbols[i]);

    CHECK(c.boundary().ones() == symbols.size());
    CHECK(c.boundary().size() == c.payload().size());
    CHECK(c.boundary().get(0));
    long double h0 = h0_total(tally(symbols, alphabet));
    CHECK((long double)c.payload().size() <=
          h0 + (long double)symbols.size() + 1e-6L);

    PlainLabelCodec back =
        PlainLabelCodec::assemble(c.code(), c.payload(), c.boundary());
    for (size_t i = 0; i < symbols.size(); i += 3)
      CHECK(back.at(i) == symbols[i]);

    CHECK_THROWS_AS(c.at(symbols.size()), std::out_of_range);
  }
}

TEST_CASE("boosted codec conditions on contexts and meets per-class bounds") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 16; ++round) {
    const uint32_t k = round % 3;
    const uint32_t sigma = 2 + rng() % 5;
    const uint32_t alphabet = 2 + rng() % 20;
    const uint32_t d = 1 + rng() % 5;
    const size_t n = 2 + rng() % 2000;

    // Positions form a synthetic tree path structure: random parent depths
    // and contexts drawn over sigma with length at most k.
    std::vector<uint32_t> symbols = random_symbols(rng, n, alphabet, true);
    std::vector<std::vector<label_t>> ctxs(n);
    std::vector<uint32_t> depth(n);
    depth[0] = 0;  // root has the empty context
    for (size_t i = 1; i < n; ++i) {
      depth[i] = 1 + rng() % 40;
      uint32_t len = std::min<uint32_t>(k, rng() % (k + 1));
      for (uint32_t j = 0; j < len; ++j)
        ctxs[i].push_back(rng() % sigma);
    }

    BoostedLabelCodec c =
        BoostedLabelCodec::build(symbols, alphabet, k, sigma, ctxs, depth, d);
    REQUIRE(c.size() == n);
    CHECK(c.context_order() == k);
    CHECK(c.context_sigma() == sigma);
    CHECK(c.sampling_period() == d);

    // Access, class identity and first-appearance numbering.
    std::map<std::vector<label_t>, uint32_t> first_seen;
    for (size_t i = 0; i < n; ++i) {
      CHECK(c.at(i) == symbols[i]);
      auto it = first_seen.find(ctxs[i]);
      if (it == first_seen.end()) {
        uint32_t id = static_cast<uint32_t>(first_seen.size());
        first_seen.emplace(ctxs[i], id);
        CHECK(c.class_of(i) == id);
      } else {
        CHECK(c.class_of(i) == it->second);
      }
    }
    CHECK(c.class_count() == first_seen.size());

    // Payload within one bit per position of the summed class entropies.
    std::map<uint32_t, std::vector<uint32_t>> per_class;
    for (size_t i = 0; i < n; ++i) per_class[c.class_of(i)].push_back(symbols[i]);
    long double sum_h0 = 0;
    for (auto& [cl, syms] : per_class) sum_h0 += h0_total_of(syms);
    CHECK((long double)c.payload().size() <= sum_h0 + (long double)n + 1e-6L);

    // Sampling: position 0 plus the sparsest depth residue mod d.
    CHECK(c.sampled(0));
    CHECK(c.sample_count() <= n / d + 1);
    std::vector<uint64_t> residue(d, 0);
    for (size_t i = 0; i < n; ++i) ++residue[depth[i] % d];
    uint32_t best = 0;
    for (uint32_t r = 1; r < d; ++r)
      if (residue[r] < residue[best]) best = r;
    for (size_t i = 0; i < n; ++i) {
      CHECK(c.sampled(i) == (depth[i] % d == best || i == 0));
      if (c.sampled(i)) CHECK(c.sampled_context(i) == ctxs[i]);
    }
    CHECK_THROWS_AS(c.sampled_context(n), std::invalid_argument);
  }
}

TEST_CASE("boosted codec class rebuild protocol") {
  std::vector<uint32_t> symbols = {0, 1, 0, 2, 1, 0};
  std::vector<std::vector<label_t>> ctxs = {{}, {0}, {0}, {1}, {}, {1}};
  std::vector<uint32_t> depth = {0, 1, 1, 2, 2, 3};
  BoostedLabelCodec built =
      BoostedLabelCodec::build(symbols, 3, 1, 2, ctxs, depth, 2);

  BoostedLabelCodec c = BoostedLabelCodec::assemble(
      1, 2, 2, built.tables(), built.payload(), built.boundary(),
      built.marker(), built.samples());
  CHECK(c.size() == symbols.size());
  CHECK_THROWS_AS(c.at(0), std::logic_error);
  CHECK_THROWS_AS(c.class_of(0), std::logic_error);

  c.begin_class_rebuild();
  for (size_t i = 0; i < symbols.size(); ++i) {
    c.assign_class(i, ctxs[i]);
    // Assigned positions decode immediately, later ones still refuse.
    CHECK(c.at(i) == symbols[i]);
    if (i + 1 < symbols.size())
      CHECK_THROWS_AS(c.class_of(i + 1), std::logic_error);
  }
  CHECK_THROWS_AS(c.assign_class(0, ctxs[0]), std::invalid_argument);
  c.end_class_rebuild();
  for (size_t i = 0; i < symbols.size(); ++i) CHECK(c.at(i) == symbols[i]);
  CHECK(c.class_of(1) == c.class_of(2));
  CHECK(c.class_of(0) != c.class_of(1));

  // Naming more distinct contexts than there are stored tables is rejected.
  {
    std::vector<uint32_t> s2 = {0, 1, 0};
    std::vector<std::vector<label_t>> cx2 = {{}, {1}, {1}};
    std::vector<uint32_t> dp2 = {0, 1, 1};
    BoostedLabelCodec b2 = BoostedLabelCodec::build(s2, 2, 1, 3, cx2, dp2, 2);
    BoostedLabelCodec r2 = BoostedLabelCodec::assemble(
        1, 3, 2, b2.tables(), b2.payload(), b2.boundary(), b2.marker(),
        b2.samples());
    r2.begin_class_rebuild();
    r2.assign_class(0, cx2[0]);
    r2.assign_class(1, cx2[1]);
    std::vector<label_t> third = {2};
    CHECK_THROWS_AS(r2.assign_class(2, third), std::invalid_argument);
  }

  BoostedLabelCodec fresh = BoostedLabelCodec::assemble(
      1, 2, 2, built.tables(), built.payload(), built.boundary(),
      built.marker(), built.samples());
  fresh.begin_class_rebuild();
  fresh.assign_class(0, ctxs[0]);
  fresh.assign_class(1, ctxs[1]);
  fresh.assign_class(3, ctxs[3]);
  // All stored classes are now named; end still requires every position.
  CHECK_THROWS_AS(fresh.end_class_rebuild(), std::invalid_argument);

  // Incomplete class coverage is also rejected at the end.
  BoostedLabelCodec partial = BoostedLabelCodec::assemble(
      1, 2, 2, built.tables(), built.payload(), built.boundary(),
      built.marker(), built.samples());
  partial.begin_class_rebuild();
  for (size_t i = 0; i < symbols.size(); ++i) partial.assign_class(i, ctxs[0]);
  CHECK_THROWS_AS(partial.end_class_rebuild(), std::invalid_argument);
}

TEST_CASE("codec input validation") {
  std::vector<uint32_t> symbols = {0, 1};
  std::vector<std::vector<label_t>> ctxs = {{}, {0}};
  std::vector<uint32_t> depth = {0, 1};
  CHECK_THROWS_AS(
      BoostedLabelCodec::build(symbols, 2, 1, 2, ctxs, depth, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      BoostedLabelCodec::build(std::vector<uint32_t>{}, 2, 1, 2, {}, {}, 1),
      std::invalid_argument);
  std::vector<std::vector<label_t>> long_ctx = {{}, {0, 1}};
  CHECK_THROWS_AS(
      BoostedLabelCodec::build(symbols, 2, 1, 2, long_ctx, depth, 1),
      std::invalid_argument);
  std::vector<uint32_t> oob = {0, 7};
  CHECK_THROWS_AS(BoostedLabelCodec::build(oob, 2, 1, 2, ctxs, depth, 1),
                  std::invalid_argument);
}
