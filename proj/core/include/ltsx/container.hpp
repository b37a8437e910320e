#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltsx/bit_vector.hpp"

namespace ltsx {

// Binary container: the 5 magic bytes "LTSX1", one format version byte, a
// sequence of sections, each a 4-character tag, a u64 payload length and the
// payload, and a final "CSUM" section holding the 64-bit FNV-1a hash of every
// byte before it.  All integers little endian.  Which sections appear and
// what their payloads mean is up to the writer (see docs/FORMAT.md for the
// tree layout); this layer only frames, orders and checksums them.

uint64_t fnv1a64(const uint8_t* p, size_t len);

// Bounds-checked little-endian primitives used for section payloads.
class ByteWriter {
 public:
  void u8(uint8_t v) { bytes_.push_back(v); }
  void u32(uint32_t v);
  void u64(uint64_t v);
  void raw(const uint8_t* p, size_t len);
  void bitvector(const BitVector& b);  // u64 bit count + packed words
  std::vector<uint8_t> take() { return std::move(bytes_); }
  size_t size() const { return bytes_.size(); }

 private:
  std::vector<uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* p, size_t len) : p_(p), len_(len) {}
  explicit ByteReader(const std::vector<uint8_t>& b) : p_(b.data()), len_(b.size()) {}

  uint8_t u8();
  uint32_t u32();
  uint64_t u64();
  const uint8_t* raw(size_t len);
  BitVector bitvector();
  size_t remaining() const { return len_ - at_; }
  size_t offset() const { return at_; }
  void expect_end() const;  // throws unless fully consumed

 private:
  const uint8_t* p_;
  size_t len_;
  size_t at_ = 0;
};

class ContainerWriter {
 public:
  // Tags must be exactly 4 characters and unique within one container.
  void add(const char* tag, std::vector<uint8_t> payload);
  std::vector<uint8_t> finish();  // appends the checksum section

 private:
  std::vector<std::pair<std::string, std::vector<uint8_t>>> sections_;
};

class ContainerReader {
 public:
  // Validates magic, version, framing and checksum; throws
  // std::invalid_argument with a description on any mismatch.
  explicit ContainerReader(std::vector<uint8_t> bytes);

  bool has(const char* tag) const;
  const std::vector<uint8_t>& get(const char* tag) const;  // throws if absent
  // Stored payload size in bytes (0 when absent); for size reports.
  size_t section_bytes(const char* tag) const;
  // Tags in file order (checksum excluded); lets loaders reject strays.
  std::vector<std::string> tags() const;

 private:
  std::vector<std::pair<std::string, std::vector<uint8_t>>> sections_;
};

// Whole-file helpers; throw std::runtime_error with the path on failure.
std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace ltsx
