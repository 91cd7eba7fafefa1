#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "binfm/binfm.hpp"
#include "binfm/error.hpp"
#include "binfm/packed.hpp"
#include "oracles.hpp"

using namespace binfm;

namespace {

BinningSpec spec_for(std::size_t d, std::size_t b) {
  BinningSpec spec;
  spec.d = d;
  spec.b = b;
  spec.strategy = BinStrategy::quantile;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t h = 1; h < b; ++h) spec.cuts.push_back(static_cast<double>(j) + static_cast<double>(h) / static_cast<double>(b));
  return spec;
}

std::string serialize(const PackedModel& pm) {
  std::ostringstream out(std::ios::binary);
  write_packed(out, pm);
  return out.str();
}

ErrorKind read_error(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  try {
    read_packed(in);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::usage;  // no error
}

void put_u64_at(std::string& bytes, std::size_t off, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes[off + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

// Header layout offsets.
constexpr std::size_t kOffVersion = 4;
constexpr std::size_t kOffP = 8;
constexpr std::size_t kOffM = 16;
constexpr std::size_t kOffD = 24;
constexpr std::size_t kOffAlpha = 40;
constexpr std::size_t kOffSpec = 56;

}  // namespace

TEST(Pack, BitOrder) {
  BinFmModel model(3, 1);
  model.proxy_w = {0.2, -0.3, 0.0};
  model.resync_signs();
  BinningSpec spec;
  spec.d = 1;
  spec.b = 3;
  spec.cuts = {0.1, 0.2};
  const PackedModel pm = pack(model, spec);
  EXPECT_EQ(pm.w_bits[0] & 0b111U, 0b101U);
  EXPECT_EQ(pm.w_bits[0] >> 3, 0U);
}

TEST(Pack, SignsRoundtripAndPayloadSize) {
  std::mt19937_64 rng(3);
  for (auto [d, b, m] : {std::tuple<std::size_t, std::size_t, std::size_t>{3, 5, 2}, {7, 13, 4}, {16, 8, 3}, {9, 30, 16}}) {
    const BinFmModel model = oracle::random_binfm(rng, d * b, m);
    const PackedModel pm = pack(model, spec_for(d, b));
    for (std::size_t j = 0; j < pm.p; ++j) {
      ASSERT_EQ(pm.sign_w(j), model.sign_w[j]);
      for (std::size_t f = 0; f < m; ++f) ASSERT_EQ(pm.sign_v(j, f), model.sign_v[model.vidx(j, f)]);
    }
    EXPECT_EQ(sign_payload_bits(pm), d * b + m * d * b);
    EXPECT_EQ(pm.alpha, model.alpha);
    EXPECT_EQ(pm.beta, model.beta);
  }
}

TEST(Popcount, AllPlusSignsTwoFeatures) {
  const BinFmModel model(6, 1);
  const PackedModel pm = pack(model, spec_for(2, 3));
  const std::vector<std::uint32_t> active = {1, 4};
  EXPECT_DOUBLE_EQ(popcount_predict(pm, ActiveMask(active, 6)), 3.0);
}

TEST(Popcount, AllPlusLinearTermIsAlphaTimesD) {
  BinFmModel model(40, 2);
  for (double& v : model.proxy_v) v = -0.5;  // keep the interaction known
  model.resync_signs();
  model.alpha = 0.37;
  model.beta = 1.0;
  const PackedModel pm = pack(model, spec_for(8, 5));
  std::mt19937_64 rng(2);
  const auto active = oracle::random_active(rng, 8, 5);
  // s_f = -8 for both factors: interaction = (64 - 8) per factor.
  EXPECT_DOUBLE_EQ(popcount_predict(pm, ActiveMask(active, 40)), 0.37 * 8 + 0.5 * 2 * 56);
}

TEST(Popcount, MatchesFloatPathOnRandomModels) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> bb(2, 32), mm(1, 8);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t b = bb(rng);
    std::uniform_int_distribution<std::size_t> dd(1, 512 / b);
    const std::size_t d = dd(rng);
    const std::size_t m = mm(rng);
    const BinFmModel model = oracle::random_binfm(rng, d * b, m);
    const PackedModel pm = pack(model, spec_for(d, b));
    const auto active = oracle::random_active(rng, d, b);
    const double fast = popcount_predict(pm, ActiveMask(active, d * b));
    ASSERT_LE(oracle::rel_err(fast, binfm_predict(model, active)), 1e-9) << "instance " << t;
  }
}

TEST(Popcount, ExhaustiveSignsAndMasksSmall) {
  // d = 2, b = 4 (p = 8), m = 1: every w, every V, every one-hot mask.
  const std::size_t d = 2, b = 4, p = 8;
  const BinningSpec spec = spec_for(d, b);
  BinFmModel model(p, 1);
  model.alpha = 0.75;
  model.beta = 1.25;
  for (unsigned wbits = 0; wbits < (1U << p); ++wbits) {
    for (unsigned vbits = 0; vbits < (1U << p); ++vbits) {
      for (std::size_t j = 0; j < p; ++j) {
        model.sign_w[j] = (wbits >> j) & 1U ? 1 : -1;
        model.sign_v[j] = (vbits >> j) & 1U ? 1 : -1;
      }
      const PackedModel pm = pack(model, spec);
      for (std::uint32_t a = 0; a < b; ++a) {
        for (std::uint32_t c = 0; c < b; ++c) {
          const std::vector<std::uint32_t> active = {a, static_cast<std::uint32_t>(b + c)};
          const double expect = oracle::binfm_brute(model, active);
          ASSERT_DOUBLE_EQ(popcount_predict(pm, ActiveMask(active, p)), expect);
        }
      }
    }
  }
}

TEST(Popcount, ExhaustiveLinearSignsSixteen) {
  // d = 4, b = 4 (p = 16): every w sign pattern against every one-hot mask,
  // with a fixed random V.
  const std::size_t d = 4, b = 4, p = 16, m = 2;
  std::mt19937_64 rng(99);
  BinFmModel model = oracle::random_binfm(rng, p, m);
  const BinningSpec spec = spec_for(d, b);
  std::vector<std::vector<std::uint32_t>> masks;
  for (std::uint32_t code = 0; code < 256; ++code) {
    std::vector<std::uint32_t> active(d);
    for (std::size_t j = 0; j < d; ++j) active[j] = static_cast<std::uint32_t>(j * b + ((code >> (2 * j)) & 3U));
    masks.push_back(active);
  }
  for (unsigned wbits = 0; wbits < (1U << p); ++wbits) {
    for (std::size_t j = 0; j < p; ++j) model.sign_w[j] = (wbits >> j) & 1U ? 1 : -1;
    const PackedModel pm = pack(model, spec);
    for (const auto& active : masks) {
      const double expect = oracle::binfm_brute(model, active);
      if (oracle::rel_err(popcount_predict(pm, ActiveMask(active, p)), expect) > 1e-9) {
        FAIL() << "w pattern " << wbits;
      }
    }
  }
}

TEST(Popcount, MaskMustHaveDBits) {
  const PackedModel pm = pack(BinFmModel(6, 1), spec_for(2, 3));
  const std::vector<std::uint32_t> one = {1};
  const std::vector<std::uint32_t> three = {0, 3, 5};
  EXPECT_THROW(popcount_predict(pm, ActiveMask(one, 6)), Error);
  EXPECT_THROW(popcount_predict(pm, ActiveMask(three, 6)), Error);
  const std::vector<std::uint32_t> outside = {1, 6};
  EXPECT_THROW(ActiveMask(outside, 6), Error);
}

class Serialization : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(8);
    pm_ = pack(oracle::random_binfm(rng, 5 * 30, 16), spec_for(5, 30));
    bytes_ = serialize(pm_);
  }
  PackedModel pm_;
  std::string bytes_;
};

TEST_F(Serialization, RoundtripIsBitExact) {
  std::istringstream in(bytes_, std::ios::binary);
  const PackedModel back = read_packed(in);
  EXPECT_EQ(back, pm_);
  EXPECT_EQ(serialize(back), bytes_);
  EXPECT_EQ(bytes_.size(), packed_record_bytes(pm_));
}

TEST_F(Serialization, SizeIsHeaderSpecAndSignWords) {
  const std::size_t header = 4 + 4 + 4 * 8 + 2 * 8;
  const std::size_t spec = 4 + 8 * 5 * 29;
  const std::size_t words = (150 + 63) / 64;
  EXPECT_EQ(bytes_.size(), header + spec + 8 * words * (1 + 16));
  EXPECT_EQ(sign_payload_bits(pm_), 150U * 17U);
  EXPECT_LE(sign_payload_bits(pm_), 64 * words * 17);
}

TEST_F(Serialization, FileRoundtrip) {
  const auto path = std::filesystem::temp_directory_path() / "binfm_packed_roundtrip.bfm";
  save(pm_, path);
  EXPECT_EQ(load(path), pm_);
  std::filesystem::remove(path);
}

TEST_F(Serialization, CorruptHeadersAreRejected) {
  auto bad = bytes_;
  bad[0] = 'X';
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  bad[kOffVersion] = 2;
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  put_u64_at(bad, kOffP, 151);
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  put_u64_at(bad, kOffM, 0);
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  put_u64_at(bad, kOffD, std::uint64_t{1} << 62);
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  put_u64_at(bad, kOffAlpha, 0x7FF8000000000000ULL);  // NaN
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  bad[kOffSpec] = 7;  // strategy tag
  EXPECT_EQ(read_error(bad), ErrorKind::format);
  bad = bytes_;
  put_u64_at(bad, kOffSpec + 4, std::bit_cast<std::uint64_t>(100.0));  // unsorted cuts
  EXPECT_EQ(read_error(bad), ErrorKind::format);
}

TEST_F(Serialization, TruncationIsRejectedAtEveryLength) {
  for (std::size_t len = 0; len < bytes_.size(); len += 7)
    ASSERT_EQ(read_error(bytes_.substr(0, len)), ErrorKind::format) << "length " << len;
}

TEST_F(Serialization, NonzeroPaddingIsRejected) {
  auto bad = bytes_;
  const std::size_t w_start = bytes_.size() - 8 * 3 * 17;
  // last w word, top byte holds padding (p = 150 -> 22 valid bits in word 2)
  bad[w_start + 2 * 8 + 7] = static_cast<char>(0x80);
  EXPECT_EQ(read_error(bad), ErrorKind::format);
}

TEST(MemoryReport, FormulasAndRatios) {
  const auto rows = memory_report(2, 30, 16);
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0].method, "FM");
  EXPECT_EQ(rows[0].bits, 32.0 * (2 + 16 * 2));
  EXPECT_EQ(rows[1].bits, 32.0 * (60 + 16 * 60));
  EXPECT_EQ(rows[2].bits, 32.0 * 2 + 16 * 2);
  EXPECT_EQ(rows[3].bits, 60.0 + 16 * 60);
  EXPECT_DOUBLE_EQ(rows[3].ratio_to_fm, 30.0 / 32.0);
  EXPECT_DOUBLE_EQ(rows[1].ratio_to_fm, 30.0);
}

TEST(MemoryReport, SmallestCase) {
  const auto rows = memory_report(1, 1, 1);
  EXPECT_EQ(rows[0].bits, 64.0);
  EXPECT_EQ(rows[3].bits, 2.0);
  EXPECT_THROW(memory_report(0, 1, 1), Error);
}

TEST(MemoryReport, RatiosAreBOver32AndB) {
  for (std::size_t d : {1, 3, 19, 300})
    for (std::size_t b : {1, 2, 10, 30, 50})
      for (std::size_t m : {1, 16, 128}) {
        const auto rows = memory_report(d, b, m);
        EXPECT_DOUBLE_EQ(rows[3].ratio_to_fm, static_cast<double>(b) / 32.0);
        EXPECT_DOUBLE_EQ(rows[1].ratio_to_fm, static_cast<double>(b));
      }
}
