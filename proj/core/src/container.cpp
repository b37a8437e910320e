#include "ltsx/container.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ltsx {

namespace {
constexpr char kMagic[5] = {'L', 'T', 'S', 'X', '1'};
constexpr uint8_t kVersion = 1;
constexpr char kChecksumTag[] = "CSUM";
}  // namespace

uint64_t fnv1a64(const uint8_t* p, size_t len) {
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

// --- byte primitives --------------------------------------------------------

void ByteWriter::u32(uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::raw(const uint8_t* p, size_t len) {
  bytes_.insert(bytes_.end(), p, p + len);
}

void ByteWriter::bitvector(const BitVector& b) {
  u64(b.size());
  for (uint64_t w : b.words()) u64(w);
}

uint8_t ByteReader::u8() {
  if (at_ + 1 > len_) throw std::invalid_argument("container: truncated payload");
  return p_[at_++];
}

uint32_t ByteReader::u32() {
  if (at_ + 4 > len_) throw std::invalid_argument("container: truncated payload");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p_[at_++]) << (8 * i);
  return v;
}

uint64_t ByteReader::u64() {
  if (at_ + 8 > len_) throw std::invalid_argument("container: truncated payload");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p_[at_++]) << (8 * i);
  return v;
}

const uint8_t* ByteReader::raw(size_t len) {
  if (at_ + len > len_ || at_ + len < at_) {
    throw std::invalid_argument("container: truncated payload");
  }
  const uint8_t* r = p_ + at_;
  at_ += len;
  return r;
}

BitVector ByteReader::bitvector() {
  const uint64_t nbits = u64();
  const uint64_t nwords = (nbits + 63) / 64;
  if (nwords > remaining() / 8) {
    throw std::invalid_argument("container: truncated bit vector");
  }
  std::vector<uint64_t> words;
  words.reserve(nwords);
  for (uint64_t i = 0; i < nwords; ++i) words.push_back(u64());
  return BitVector(std::move(words), nbits);
}

void ByteReader::expect_end() const {
  if (at_ != len_) throw std::invalid_argument("container: trailing payload bytes");
}

// --- container framing ------------------------------------------------------

void ContainerWriter::add(const char* tag, std::vector<uint8_t> payload) {
  if (std::strlen(tag) != 4) throw std::logic_error("container: tag must be 4 chars");
  for (const auto& s : sections_) {
    if (s.first == tag) throw std::logic_error("container: duplicate section");
  }
  sections_.emplace_back(tag, std::move(payload));
}

std::vector<uint8_t> ContainerWriter::finish() {
  std::vector<uint8_t> out(kMagic, kMagic + 5);
  out.push_back(kVersion);
  for (const auto& [tag, payload] : sections_) {
    out.insert(out.end(), tag.begin(), tag.end());
    uint64_t len = payload.size();
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(len >> (8 * i)));
    out.insert(out.end(), payload.begin(), payload.end());
  }
  const uint64_t sum = fnv1a64(out.data(), out.size());
  out.insert(out.end(), kChecksumTag, kChecksumTag + 4);
  const uint64_t len = 8;
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(len >> (8 * i)));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(sum >> (8 * i)));
  return out;
}

ContainerReader::ContainerReader(std::vector<uint8_t> bytes) {
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kMagic, 5) != 0) {
    throw std::invalid_argument("container: bad magic");
  }
  if (bytes[5] != kVersion) {
    throw std::invalid_argument("container: unsupported version");
  }
  size_t at = 6;
  bool checked = false;
  while (at < bytes.size()) {
    if (checked) throw std::invalid_argument("container: data after checksum");
    if (at + 12 > bytes.size()) throw std::invalid_argument("container: truncated section");
    std::string tag(reinterpret_cast<const char*>(bytes.data() + at), 4);
    uint64_t len = 0;
    for (int i = 0; i < 8; ++i) {
      len |= static_cast<uint64_t>(bytes[at + 4 + i]) << (8 * i);
    }
    if (len > bytes.size() - at - 12) {
      throw std::invalid_argument("container: truncated section");
    }
    const uint8_t* payload = bytes.data() + at + 12;
    if (tag == kChecksumTag) {
      if (len != 8) throw std::invalid_argument("container: bad checksum section");
      uint64_t stored = 0;
      for (int i = 0; i < 8; ++i) stored |= static_cast<uint64_t>(payload[i]) << (8 * i);
      if (stored != fnv1a64(bytes.data(), at)) {
        throw std::invalid_argument("container: checksum mismatch");
      }
      checked = true;
    } else {
      for (const auto& s : sections_) {
        if (s.first == tag) throw std::invalid_argument("container: duplicate section");
      }
      sections_.emplace_back(std::move(tag),
                             std::vector<uint8_t>(payload, payload + len));
    }
    at += 12 + len;
  }
  if (!checked) throw std::invalid_argument("container: missing checksum");
}

bool ContainerReader::has(const char* tag) const {
  for (const auto& s : sections_) {
    if (s.first == tag) return true;
  }
  return false;
}

const std::vector<uint8_t>& ContainerReader::get(const char* tag) const {
  for (const auto& s : sections_) {
    if (s.first == tag) return s.second;
  }
  throw std::invalid_argument(std::string("container: missing section ") + tag);
}

size_t ContainerReader::section_bytes(const char* tag) const {
  for (const auto& s : sections_) {
    if (s.first == tag) return s.second.size();
  }
  return 0;
}

std::vector<std::string> ContainerReader::tags() const {
  std::vector<std::string> out;
  out.reserve(sections_.size());
  for (const auto& s : sections_) out.push_back(s.first);
  return out;
}

// --- files ------------------------------------------------------------------

std::vector<uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace ltsx
