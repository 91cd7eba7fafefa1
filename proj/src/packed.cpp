#include "binfm/packed.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "binfm/error.hpp"
#include "binary_io.hpp"

namespace binfm {

std::int8_t PackedModel::sign_w(std::size_t j) const noexcept {
  return (w_bits[j / 64] >> (j % 64)) & 1U ? 1 : -1;
}

std::int8_t PackedModel::sign_v(std::size_t j, std::size_t f) const noexcept {
  return (v_bits[f * words() + j / 64] >> (j % 64)) & 1U ? 1 : -1;
}

ActiveMask::ActiveMask(std::span<const std::uint32_t> active, std::size_t p) : words_((p + 63) / 64, 0) {
  for (std::uint32_t j : active) {
    if (j >= p) throw Error(ErrorKind::data, "active index outside the model dimensionality");
    words_[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) {
      nonzero_.push_back(static_cast<std::uint32_t>(i));
      count_ += static_cast<std::size_t>(std::popcount(words_[i]));
    }
  }
}

PackedModel pack(const BinFmModel& model, const BinningSpec& spec) {
  if (model.p != spec.p()) throw Error(ErrorKind::usage, "pack: model dimensionality does not match the binning");
  PackedModel pm;
  pm.p = model.p;
  pm.m = model.m;
  pm.d = spec.d;
  pm.b = spec.b;
  pm.alpha = model.alpha;
  pm.beta = model.beta;
  pm.spec = spec;
  const std::size_t words = pm.words();
  pm.w_bits.assign(words, 0);
  pm.v_bits.assign(words * pm.m, 0);
  for (std::size_t j = 0; j < pm.p; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    if (model.sign_w[j] > 0) pm.w_bits[j / 64] |= bit;
    for (std::size_t f = 0; f < pm.m; ++f)
      if (model.sign_v[model.vidx(j, f)] > 0) pm.v_bits[f * words + j / 64] |= bit;
  }
  return pm;
}

double popcount_predict(const PackedModel& pm, const ActiveMask& mask) {
  if (mask.count() != pm.d)
    throw Error(ErrorKind::data, "active mask has " + std::to_string(mask.count()) + " bits set, expected " +
                                     std::to_string(pm.d));
  if (mask.words().size() != pm.words()) throw Error(ErrorKind::data, "active mask width does not match the model");
  const auto d = static_cast<std::int64_t>(pm.d);
  const auto mw = mask.words();

  // Over a 0/1 mask with d bits, sum of +-1 signs = 2 * |mask AND plus-bits| - d.
  std::int64_t plus = 0;
  for (std::uint32_t i : mask.nonzero_words()) plus += std::popcount(mw[i] & pm.w_bits[i]);
  const std::int64_t linear = 2 * plus - d;

  std::int64_t interaction = 0;
  for (std::size_t f = 0; f < pm.m; ++f) {
    const auto bits = pm.factor_bits(f);
    std::int64_t pf = 0;
    for (std::uint32_t i : mask.nonzero_words()) pf += std::popcount(mw[i] & bits[i]);
    const std::int64_t s = 2 * pf - d;
    interaction += s * s - d;
  }
  return pm.alpha * static_cast<double>(linear) + 0.5 * pm.beta * pm.beta * static_cast<double>(interaction);
}

void write_packed(std::ostream& out, const PackedModel& pm) {
  out.write(kPackedMagic, 4);
  io::put_u32(out, kPackedVersion);
  io::put_u64(out, pm.p);
  io::put_u64(out, pm.m);
  io::put_u64(out, pm.d);
  io::put_u64(out, pm.b);
  io::put_f64(out, pm.alpha);
  io::put_f64(out, pm.beta);
  io::put_spec(out, pm.spec);
  for (std::uint64_t w : pm.w_bits) io::put_u64(out, w);
  for (std::uint64_t w : pm.v_bits) io::put_u64(out, w);
}

PackedModel read_packed(std::istream& in) {
  char magic[4];
  io::get_bytes(in, magic, 4);
  if (std::memcmp(magic, kPackedMagic, 4) != 0) throw Error(ErrorKind::format, "not a BFM1 model (bad magic)");
  const std::uint32_t version = io::get_u32(in);
  if (version != kPackedVersion)
    throw Error(ErrorKind::format, "unsupported BFM1 version " + std::to_string(version));
  PackedModel pm;
  pm.p = io::get_size(in);
  pm.m = io::get_size(in);
  pm.d = io::get_size(in);
  pm.b = io::get_size(in);
  if (pm.m < 1 || pm.d < 1 || pm.b < 2) throw Error(ErrorKind::format, "BFM1: invalid dimensions");
  if (pm.d > io::kMaxDim || pm.b > io::kMaxDim || pm.p != pm.d * pm.b)
    throw Error(ErrorKind::format, "BFM1: dimension inconsistency (p != d * b)");
  if (pm.m > io::kMaxDim || pm.words() * pm.m > io::kMaxWords) throw Error(ErrorKind::format, "BFM1: model too large");
  pm.alpha = io::get_f64(in);
  pm.beta = io::get_f64(in);
  if (!std::isfinite(pm.alpha) || !std::isfinite(pm.beta)) throw Error(ErrorKind::format, "BFM1: non-finite scale");
  pm.spec = io::get_spec(in, pm.d, pm.b);
  pm.w_bits.resize(pm.words());
  for (std::uint64_t& w : pm.w_bits) w = io::get_u64(in);
  pm.v_bits.resize(pm.words() * pm.m);
  for (std::uint64_t& w : pm.v_bits) w = io::get_u64(in);
  if (const std::size_t tail = pm.p % 64; tail != 0) {
    const std::uint64_t pad = ~std::uint64_t{0} << tail;
    bool dirty = (pm.w_bits.back() & pad) != 0;
    for (std::size_t f = 0; f < pm.m; ++f) dirty = dirty || (pm.factor_bits(f).back() & pad) != 0;
    if (dirty) throw Error(ErrorKind::format, "BFM1: nonzero padding bits");
  }
  return pm;
}

std::size_t packed_record_bytes(const PackedModel& pm) noexcept {
  return 4 + 4 + 4 * 8 + 2 * 8 + io::spec_bytes(pm.spec) + 8 * (pm.w_bits.size() + pm.v_bits.size());
}

void save(const PackedModel& pm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  write_packed(out, pm);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

PackedModel load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_packed(in);
}

std::vector<MemoryRow> memory_report(std::size_t d, std::size_t b, std::size_t m) {
  if (d < 1 || b < 1 || m < 1) throw Error(ErrorKind::usage, "memory report needs d, b, m >= 1");
  const double dd = static_cast<double>(d);
  const double bb = static_cast<double>(b);
  const double mm = static_cast<double>(m);
  const double fm = 32.0 * (dd + mm * dd);
  const double sefm = 32.0 * (dd * bb + mm * dd * bb);
  const double dfm = 32.0 * dd + mm * dd;
  const double bin = dd * bb + mm * dd * bb;
  return {{"FM", fm, 1.0}, {"SEFM", sefm, sefm / fm}, {"DFM", dfm, dfm / fm}, {"Binarized FM", bin, bin / fm}};
}

}  // namespace binfm
