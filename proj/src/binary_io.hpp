#pragma once

// Little-endian primitives shared by the model file formats.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>

#include "binfm/encoder.hpp"
#include "binfm/error.hpp"

namespace binfm::io {

// Sanity limits applied while reading so a corrupted header cannot request an
// absurd allocation.
inline constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kMaxWords = std::uint64_t{1} << 31;
inline constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 40;

inline void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(buf, bytes);
}

inline void put_u32(std::ostream& out, std::uint32_t v) { put_le(out, v, 4); }
inline void put_u64(std::ostream& out, std::uint64_t v) { put_le(out, v, 8); }
inline void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v), 8); }

inline void get_bytes(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw Error(ErrorKind::format, "model file is truncated");
}

inline std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char buf[8];
  get_bytes(in, reinterpret_cast<char*>(buf), static_cast<std::size_t>(bytes));
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

inline std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_le(in, 4)); }
inline std::uint64_t get_u64(std::istream& in) { return get_le(in, 8); }
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_le(in, 8)); }

inline std::size_t get_size(std::istream& in) {
  const std::uint64_t v = get_u64(in);
  if (v > kMaxSize || v > std::numeric_limits<std::size_t>::max())
    throw Error(ErrorKind::format, "dimension field out of range");
  return static_cast<std::size_t>(v);
}

// Strategy tag followed by d * (b - 1) cut points.
inline void put_spec(std::ostream& out, const BinningSpec& spec) {
  put_u32(out, static_cast<std::uint32_t>(spec.strategy));
  for (double c : spec.cuts) put_f64(out, c);
}

inline BinningSpec get_spec(std::istream& in, std::size_t d, std::size_t b) {
  BinningSpec spec;
  spec.d = d;
  spec.b = b;
  const std::uint32_t tag = get_u32(in);
  if (tag > 1) throw Error(ErrorKind::format, "unknown bin strategy tag");
  spec.strategy = static_cast<BinStrategy>(tag);
  if (d * (b - 1) > kMaxWords) throw Error(ErrorKind::format, "binning spec too large");
  spec.cuts.resize(d * (b - 1));
  for (double& c : spec.cuts) c = get_f64(in);
  validate(spec);
  return spec;
}

inline std::size_t spec_bytes(const BinningSpec& spec) noexcept { return 4 + 8 * spec.cuts.size(); }

}  // namespace binfm::io
