#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltsx/bit_vector.hpp"
#include "ltsx/huffman.hpp"
#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// Zeroth-order coded symbol string with random access: one canonical Huffman
// code, all codes concatenated in position order, plus a bitmap marking code
// starts.  at(i) selects the i-th start and decodes one code, so the payload
// never exceeds |P| * H0(P) + |P| bits.
class PlainLabelCodec {
 public:
  PlainLabelCodec() = default;

  static PlainLabelCodec build(std::span<const uint32_t> symbols,
                               size_t alphabet);
  // Load path; validates that payload and boundary fit together.
  static PlainLabelCodec assemble(Huffman code, BitVector payload,
                                  BitVector boundary);

  size_t size() const { return count_; }
  uint32_t at(size_t i) const;

  const Huffman& code() const { return code_; }
  const BitVector& payload() const { return payload_; }
  const BitVector& boundary() const { return boundary_; }

 private:
  Huffman code_;
  BitVector payload_;
  BitVector boundary_;
  size_t count_ = 0;
};

// Context-boosted coded string.  Positions are partitioned into classes, one
// per distinct context (a sequence of at most k labels below sigma); every
// class gets its own canonical Huffman table over the same symbol alphabet,
// while the codes still form a single stream in position order with a single
// start bitmap.
//
// The class of a position is never stored per position.  Instead the
// contexts of a sampled subset of positions are stored verbatim: those whose
// node depth is congruent to the sparsest residue modulo the period d, plus
// position 0.  Any other context is derived by replaying contexts along the
// tree, anchored at the samples; class ids are assigned by first appearance
// in position order, which makes the derivation reproducible bit for bit.
// A loader replays contexts via begin_class_rebuild/assign_class (position
// order) before at() is usable.
class BoostedLabelCodec {
 public:
  BoostedLabelCodec() = default;

  static BoostedLabelCodec build(std::span<const uint32_t> symbols,
                                 size_t alphabet, uint32_t k, size_t sigma,
                                 const std::vector<std::vector<label_t>>& contexts,
                                 std::span<const uint32_t> depth, uint32_t d);

  static BoostedLabelCodec assemble(uint32_t k, size_t sigma, uint32_t d,
                                    std::vector<Huffman> tables,
                                    BitVector payload, BitVector boundary,
                                    BitVector marker, BitVector samples);

  size_t size() const { return count_; }
  uint32_t at(size_t i) const;
  uint32_t class_of(size_t i) const;
  uint32_t class_count() const { return static_cast<uint32_t>(tables_.size()); }

  uint32_t context_order() const { return k_; }
  size_t context_sigma() const { return sigma_; }
  uint32_t sampling_period() const { return d_; }
  size_t sample_count() const { return marker_.ones(); }
  bool sampled(size_t i) const { return marker_.get(i); }
  std::vector<label_t> sampled_context(size_t i) const;

  void begin_class_rebuild();
  // Returns the class id named by ctx; throws std::invalid_argument when the
  // contexts name more classes than tables were stored.
  uint32_t assign_class(size_t i, std::span<const label_t> ctx);
  void end_class_rebuild();  // every stored table must have been named

  const std::vector<Huffman>& tables() const { return tables_; }
  const BitVector& payload() const { return payload_; }
  const BitVector& boundary() const { return boundary_; }
  const BitVector& marker() const { return marker_; }
  const BitVector& samples() const { return samples_; }

 private:
  static uint32_t width_of(uint64_t values);  // bits for ids in [0, values)
  uint32_t sample_stride() const;
  void check_geometry() const;

  uint32_t k_ = 0;
  size_t sigma_ = 1;
  uint32_t d_ = 1;
  std::vector<Huffman> tables_;
  BitVector payload_;
  BitVector boundary_;
  BitVector marker_;   // one bit per position: context stored verbatim
  BitVector samples_;  // fixed-width records: length, then k label slots
  size_t count_ = 0;
  // Derived, rebuilt after loading: class per position and the context map.
  std::vector<uint32_t> classid_;
  std::unordered_map<std::string, uint32_t> class_by_ctx_;
  size_t assigned_ = 0;
  bool rebuilt_ = true;
};

}  // namespace ltsx
