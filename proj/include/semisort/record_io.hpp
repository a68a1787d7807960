#pragma once

// Binary record dump: a 16-byte header followed by packed little-endian
// records.
//
//   offset  size  field
//   0       4     magic "SSRT"
//   4       1     key width in bytes (4, 8 or 16)
//   5       1     value width in bytes (0 or the key width)
//   6       2     reserved, zero
//   8       8     record count n, u64 little-endian
//
// Each record is its key then its value; 128-bit words are low half first.

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "semisort/types.hpp"

namespace semisort {

inline constexpr std::array<char, 4> kRecordMagic{'S', 'S', 'R', 'T'};

struct RecordFileHeader {
  unsigned key_bytes = 8;
  unsigned value_bytes = 8;
  std::uint64_t count = 0;

  friend bool operator==(const RecordFileHeader&, const RecordFileHeader&) = default;
};

namespace io_detail {

inline void put_u64(unsigned char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
inline std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}
inline void put_u32(unsigned char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
inline std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

template <class W>
constexpr std::size_t width_of() {
  if constexpr (std::is_same_v<W, NoValue>)
    return 0;
  else
    return sizeof(W);
}

template <class W>
void put_word(unsigned char* p, const W& w) {
  if constexpr (std::is_same_v<W, NoValue>) {
  } else if constexpr (std::is_same_v<W, Key128>) {
    put_u64(p, w.lo);
    put_u64(p + 8, w.hi);
  } else if constexpr (sizeof(W) == 8) {
    put_u64(p, w);
  } else {
    put_u32(p, w);
  }
}

template <class W>
W get_word(const unsigned char* p) {
  if constexpr (std::is_same_v<W, NoValue>)
    return {};
  else if constexpr (std::is_same_v<W, Key128>)
    return Key128{get_u64(p), get_u64(p + 8)};
  else if constexpr (sizeof(W) == 8)
    return get_u64(p);
  else
    return get_u32(p);
}

}  // namespace io_detail

template <class Rec>
RecordFileHeader header_for(std::size_t n) {
  return {static_cast<unsigned>(io_detail::width_of<typename Rec::key_type>()),
          static_cast<unsigned>(io_detail::width_of<typename Rec::value_type>()), n};
}

inline void write_header(std::ostream& out, const RecordFileHeader& h) {
  std::array<unsigned char, 16> buf{};
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(kRecordMagic[i]);
  buf[4] = static_cast<unsigned char>(h.key_bytes);
  buf[5] = static_cast<unsigned char>(h.value_bytes);
  io_detail::put_u64(buf.data() + 8, h.count);
  out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

/// Reads and checks the header. Throws InputError on a bad magic, widths
/// outside {4, 8, 16} / {0, key width}, or a truncated header.
inline RecordFileHeader read_header(std::istream& in) {
  std::array<unsigned char, 16> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    throw InputError("record file: truncated header");
  for (int i = 0; i < 4; ++i)
    if (buf[i] != static_cast<unsigned char>(kRecordMagic[i])) throw InputError("record file: bad magic");
  RecordFileHeader h{buf[4], buf[5], io_detail::get_u64(buf.data() + 8)};
  if (h.key_bytes != 4 && h.key_bytes != 8 && h.key_bytes != 16)
    throw InputError("record file: unsupported key width " + std::to_string(h.key_bytes));
  if (h.value_bytes != 0 && h.value_bytes != h.key_bytes)
    throw InputError("record file: value width must be 0 or the key width");
  return h;
}

/// Writes the header followed by the packed records.
template <class Rec>
void write_records(std::ostream& out, std::span<const Rec> records) {
  using K = typename Rec::key_type;
  using V = typename Rec::value_type;
  constexpr std::size_t kw = io_detail::width_of<K>();
  constexpr std::size_t vw = io_detail::width_of<V>();
  write_header(out, header_for<Rec>(records.size()));
  std::vector<unsigned char> buf;
  constexpr std::size_t kChunk = 1 << 16;
  for (std::size_t lo = 0; lo < records.size(); lo += kChunk) {
    const std::size_t hi = std::min(records.size(), lo + kChunk);
    buf.resize((hi - lo) * (kw + vw));
    unsigned char* p = buf.data();
    for (std::size_t i = lo; i < hi; ++i, p += kw + vw) {
      io_detail::put_word(p, records[i].key);
      io_detail::put_word(p + kw, records[i].value);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw InputError("record file: write failed");
}

/// Reads the body that follows `h`. The record type must match its widths.
template <class Rec>
std::vector<Rec> read_records(std::istream& in, const RecordFileHeader& h) {
  using K = typename Rec::key_type;
  using V = typename Rec::value_type;
  constexpr std::size_t kw = io_detail::width_of<K>();
  constexpr std::size_t vw = io_detail::width_of<V>();
  if (h.key_bytes != kw || h.value_bytes != vw)
    throw InputError("record file: widths do not match the requested record type");
  // Grow as data arrives so that a corrupt count cannot force a huge allocation.
  std::vector<Rec> out;
  std::vector<unsigned char> buf;
  constexpr std::size_t kChunk = 1 << 16;
  for (std::uint64_t lo = 0; lo < h.count; lo += kChunk) {
    const std::size_t hi = static_cast<std::size_t>(std::min<std::uint64_t>(h.count, lo + kChunk));
    out.resize(hi);
    buf.resize((hi - lo) * (kw + vw));
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
      throw InputError("record file: truncated body (expected " + std::to_string(h.count) + " records)");
    const unsigned char* p = buf.data();
    for (std::size_t i = lo; i < hi; ++i, p += kw + vw) {
      out[i].key = io_detail::get_word<K>(p);
      out[i].value = io_detail::get_word<V>(p + kw);
    }
  }
  return out;
}

}  // namespace semisort
