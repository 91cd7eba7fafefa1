#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "binfm/binfm.hpp"
#include "binfm/encoder.hpp"

namespace binfm {

/// Deployable binarized model: one bit per coefficient.
///
/// Bit k of word i encodes parameter index 64*i + k, 1 meaning +1 and 0
/// meaning -1. Padding bits past p are 0. V is stored per factor: factor f
/// occupies v_bits[f*words(), (f+1)*words()).
struct PackedModel {
  std::size_t p = 0;
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t b = 0;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<std::uint64_t> w_bits;
  std::vector<std::uint64_t> v_bits;
  BinningSpec spec;

  [[nodiscard]] std::size_t words() const noexcept { return (p + 63) / 64; }
  [[nodiscard]] std::span<const std::uint64_t> factor_bits(std::size_t f) const noexcept {
    return std::span<const std::uint64_t>(v_bits).subspan(f * words(), words());
  }
  [[nodiscard]] std::int8_t sign_w(std::size_t j) const noexcept;
  [[nodiscard]] std::int8_t sign_v(std::size_t j, std::size_t f) const noexcept;

  friend bool operator==(const PackedModel&, const PackedModel&) = default;
};

/// Bitset of an encoded sample's active indices.
class ActiveMask {
 public:
  ActiveMask(std::span<const std::uint32_t> active, std::size_t p);

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  // Positions of the words that have at least one bit set.
  [[nodiscard]] std::span<const std::uint32_t> nonzero_words() const noexcept { return nonzero_; }

 private:
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> nonzero_;
  std::size_t count_ = 0;
};

/// Drops proxies and optimizer state and keeps only the signs and scales.
PackedModel pack(const BinFmModel& model, const BinningSpec& spec);

/// Mask-AND + popcount evaluation of the binarized score. Throws Error(data)
/// unless the mask has exactly d bits set.
double popcount_predict(const PackedModel& pm, const ActiveMask& mask);

/// Number of sign bits carried by the model: p * (1 + m).
[[nodiscard]] constexpr std::size_t sign_payload_bits(const PackedModel& pm) noexcept { return pm.p * (1 + pm.m); }

inline constexpr char kPackedMagic[4] = {'B', 'F', 'M', '1'};
inline constexpr std::uint32_t kPackedVersion = 1;

/// Little-endian "BFM1" record (see README for the layout).
void write_packed(std::ostream& out, const PackedModel& pm);
PackedModel read_packed(std::istream& in);
/// Size in bytes of the record write_packed produces.
std::size_t packed_record_bytes(const PackedModel& pm) noexcept;

void save(const PackedModel& pm, const std::filesystem::path& path);
PackedModel load(const std::filesystem::path& path);

struct MemoryRow {
  std::string method;
  double bits = 0.0;
  double ratio_to_fm = 0.0;
};

/// Parameter memory of FM, SEFM, DFM and the binarized FM for d original
/// features, b bins and rank m, each also relative to FM.
std::vector<MemoryRow> memory_report(std::size_t d, std::size_t b, std::size_t m);

}  // namespace binfm
