#include "ltsx/label_codec.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "ltsx/entropy.hpp"

namespace ltsx {

// --- PlainLabelCodec --------------------------------------------------------

PlainLabelCodec PlainLabelCodec::build(std::span<const uint32_t> symbols,
                                       size_t alphabet) {
  if (symbols.empty()) throw std::invalid_argument("codec: empty string");
  std::vector<uint64_t> counts(alphabet, 0);
  for (uint32_t s : symbols) {
    if (s >= alphabet) throw std::invalid_argument("codec: symbol out of range");
    ++counts[s];
  }
  PlainLabelCodec c;
  c.code_ = Huffman::build(counts);
  BitBuffer payload, boundary;
  for (uint32_t s : symbols) {
    const size_t at = payload.size();
    c.code_.append(payload, s);
    while (boundary.size() < payload.size()) {
      boundary.push_bit(boundary.size() == at);
    }
  }
  c.payload_ = BitVector(payload);
  c.boundary_ = BitVector(boundary);
  c.count_ = symbols.size();
  return c;
}

PlainLabelCodec PlainLabelCodec::assemble(Huffman code, BitVector payload,
                                          BitVector boundary) {
  PlainLabelCodec c;
  c.code_ = std::move(code);
  c.payload_ = std::move(payload);
  c.boundary_ = std::move(boundary);
  c.count_ = c.boundary_.ones();
  if (c.boundary_.size() != c.payload_.size() || c.count_ == 0) {
    throw std::invalid_argument("codec: payload/boundary mismatch");
  }
  return c;
}

uint32_t PlainLabelCodec::at(size_t i) const {
  if (i >= count_) throw std::out_of_range("codec: position out of range");
  return code_.decode(payload_, boundary_.select1(i + 1));
}

// --- BoostedLabelCodec ------------------------------------------------------

uint32_t BoostedLabelCodec::width_of(uint64_t values) {
  return values <= 1 ? 0 : static_cast<uint32_t>(std::bit_width(values - 1));
}

uint32_t BoostedLabelCodec::sample_stride() const {
  return width_of(static_cast<uint64_t>(k_) + 1) + k_ * width_of(sigma_);
}

BoostedLabelCodec BoostedLabelCodec::build(
    std::span<const uint32_t> symbols, size_t alphabet, uint32_t k,
    size_t sigma, const std::vector<std::vector<label_t>>& contexts,
    std::span<const uint32_t> depth, uint32_t d) {
  const size_t n = symbols.size();
  if (n == 0) throw std::invalid_argument("codec: empty string");
  if (contexts.size() != n || depth.size() != n || d == 0 || sigma == 0) {
    throw std::invalid_argument("codec: inconsistent build inputs");
  }

  BoostedLabelCodec c;
  c.k_ = k;
  c.sigma_ = sigma;
  c.d_ = d;
  c.count_ = n;

  // Classes by first appearance of the context in position order.
  c.classid_.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (contexts[i].size() > k)
      throw std::invalid_argument("codec: context longer than k");
    for (label_t l : contexts[i]) {
      if (l >= sigma) throw std::invalid_argument("codec: context label range");
    }
    const std::string key = pack_context(contexts[i]);
    auto it = c.class_by_ctx_.find(key);
    if (it == c.class_by_ctx_.end()) {
      const uint32_t id = static_cast<uint32_t>(c.class_by_ctx_.size());
      c.class_by_ctx_.emplace(key, id);
      c.classid_[i] = id;
    } else {
      c.classid_[i] = it->second;
    }
  }
  const size_t classes = c.class_by_ctx_.size();

  // Per-class tables over the shared symbol alphabet.
  std::vector<std::vector<uint64_t>> counts(
      classes, std::vector<uint64_t>(alphabet, 0));
  for (size_t i = 0; i < n; ++i) {
    if (symbols[i] >= alphabet)
      throw std::invalid_argument("codec: symbol out of range");
    ++counts[c.classid_[i]][symbols[i]];
  }
  c.tables_.reserve(classes);
  for (size_t cl = 0; cl < classes; ++cl) {
    c.tables_.push_back(Huffman::build(counts[cl]));
  }

  // Single stream in position order; each code from its class table.
  BitBuffer payload, boundary;
  for (size_t i = 0; i < n; ++i) {
    const size_t at = payload.size();
    c.tables_[c.classid_[i]].append(payload, symbols[i]);
    while (boundary.size() < payload.size()) {
      boundary.push_bit(boundary.size() == at);
    }
  }
  c.payload_ = BitVector(payload);
  c.boundary_ = BitVector(boundary);

  // Sampling: the sparsest depth residue modulo d, plus position 0.
  std::vector<uint64_t> residue(d, 0);
  for (size_t i = 0; i < n; ++i) ++residue[depth[i] % d];
  uint32_t best = 0;
  for (uint32_t r = 1; r < d; ++r) {
    if (residue[r] < residue[best]) best = r;
  }
  BitBuffer marker, samples;
  const uint32_t lw = width_of(static_cast<uint64_t>(k) + 1);
  const uint32_t cw = width_of(sigma);
  for (size_t i = 0; i < n; ++i) {
    const bool mark = (depth[i] % d == best) || i == 0;
    marker.push_bit(mark);
    if (mark) {
      samples.push_bits(contexts[i].size(), lw);
      for (uint32_t j = 0; j < k; ++j) {
        samples.push_bits(j < contexts[i].size() ? contexts[i][j] : 0, cw);
      }
    }
  }
  c.marker_ = BitVector(marker);
  c.samples_ = BitVector(samples);
  c.rebuilt_ = true;
  c.assigned_ = n;
  c.check_geometry();
  return c;
}

BoostedLabelCodec BoostedLabelCodec::assemble(uint32_t k, size_t sigma,
                                              uint32_t d,
                                              std::vector<Huffman> tables,
                                              BitVector payload,
                                              BitVector boundary,
                                              BitVector marker,
                                              BitVector samples) {
  if (d == 0 || sigma == 0 || tables.empty()) {
    throw std::invalid_argument("codec: inconsistent stored parts");
  }
  BoostedLabelCodec c;
  c.k_ = k;
  c.sigma_ = sigma;
  c.d_ = d;
  c.tables_ = std::move(tables);
  c.payload_ = std::move(payload);
  c.boundary_ = std::move(boundary);
  c.marker_ = std::move(marker);
  c.samples_ = std::move(samples);
  c.count_ = c.boundary_.ones();
  c.rebuilt_ = false;
  c.check_geometry();
  return c;
}

void BoostedLabelCodec::check_geometry() const {
  if (count_ == 0 || boundary_.size() != payload_.size() ||
      marker_.size() != count_ || !marker_.get(0) ||
      samples_.size() != marker_.ones() * static_cast<size_t>(sample_stride())) {
    throw std::invalid_argument("codec: payload/boundary/sampling mismatch");
  }
}

uint32_t BoostedLabelCodec::at(size_t i) const {
  return tables_[class_of(i)].decode(payload_, boundary_.select1(i + 1));
}

uint32_t BoostedLabelCodec::class_of(size_t i) const {
  if (i >= count_) throw std::out_of_range("codec: position out of range");
  // Valid once the position has been assigned, even mid-rebuild: a loader
  // decodes each position right after naming its context, because the
  // contexts of later positions derive from the decoded symbols.
  if (i >= classid_.size() || classid_[i] == NO_NODE) {
    throw std::logic_error("codec: classes not rebuilt yet");
  }
  return classid_[i];
}

std::vector<label_t> BoostedLabelCodec::sampled_context(size_t i) const {
  if (i >= count_ || !marker_.get(i)) {
    throw std::invalid_argument("codec: position not sampled");
  }
  const uint32_t lw = width_of(static_cast<uint64_t>(k_) + 1);
  const uint32_t cw = width_of(sigma_);
  size_t at = marker_.rank1(i) * static_cast<size_t>(sample_stride());
  auto take = [&](uint32_t width) {
    uint64_t v = 0;
    for (uint32_t b = 0; b < width; ++b) {
      v |= static_cast<uint64_t>(samples_.get(at++)) << b;
    }
    return v;
  };
  const uint64_t len = take(lw);
  if (len > k_) throw std::invalid_argument("codec: corrupt sampled context");
  std::vector<label_t> ctx;
  ctx.reserve(len);
  for (uint32_t j = 0; j < k_; ++j) {
    const uint64_t l = take(cw);
    if (j < len) {
      if (l >= sigma_) throw std::invalid_argument("codec: corrupt sampled context");
      ctx.push_back(static_cast<label_t>(l));
    }
  }
  return ctx;
}

void BoostedLabelCodec::begin_class_rebuild() {
  classid_.assign(count_, NO_NODE);
  class_by_ctx_.clear();
  assigned_ = 0;
  rebuilt_ = false;
}

uint32_t BoostedLabelCodec::assign_class(size_t i, std::span<const label_t> ctx) {
  if (i >= count_) throw std::out_of_range("codec: position out of range");
  if (i < classid_.size() && classid_[i] != NO_NODE) {
    throw std::invalid_argument("codec: position named twice");
  }
  const std::string key = pack_context(ctx);
  auto it = class_by_ctx_.find(key);
  uint32_t id;
  if (it == class_by_ctx_.end()) {
    id = static_cast<uint32_t>(class_by_ctx_.size());
    if (id >= tables_.size()) {
      throw std::invalid_argument("codec: context names no stored class");
    }
    class_by_ctx_.emplace(key, id);
  } else {
    id = it->second;
  }
  classid_[i] = id;
  ++assigned_;
  return id;
}

void BoostedLabelCodec::end_class_rebuild() {
  if (assigned_ != count_ || class_by_ctx_.size() != tables_.size()) {
    throw std::invalid_argument("codec: class rebuild incomplete");
  }
  rebuilt_ = true;
}

}  // namespace ltsx
