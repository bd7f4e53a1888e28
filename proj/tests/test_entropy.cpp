#include <random>
#include <string>

#include "doctest.h"
#include "sevc/entropy.hpp"

using namespace sevc;

namespace {

std::string to_string(const Bits& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

struct BitReader {
  const Bits& bits;
  std::size_t pos = 0;
  int operator()() { return bits.at(pos++); }
};

}  // namespace

TEST_CASE("truncated unary") {
  CHECK(to_string(binarize_truncated_unary(0, 5)) == "0");
  CHECK(to_string(binarize_truncated_unary(5, 5)) == "11111");
  CHECK(to_string(binarize_truncated_unary(3, 5)) == "1110");
  CHECK_THROWS_AS(binarize_truncated_unary(6, 5), Error);
  for (int v = 0; v <= 5; ++v) {
    const Bits bits = binarize_truncated_unary(v, 5);
    CHECK(bits.size() <= 5);
    BitReader r{bits};
    CHECK(debinarize_truncated_unary(r, 5) == v);
    CHECK(r.pos == bits.size());
  }
}

TEST_CASE("fixed length") {
  CHECK(to_string(binarize_fixed_length(0, 6)) == "000000");
  CHECK(to_string(binarize_fixed_length(60, 6)) == "111100");
  CHECK_THROWS_AS(binarize_fixed_length(64, 6), Error);
  for (std::uint32_t v = 0; v < 64; ++v) {
    const Bits bits = binarize_fixed_length(v, 6);
    BitReader r{bits};
    CHECK(debinarize_fixed_length(r, 6) == v);
  }
}

TEST_CASE("golomb-rice") {
  auto gr = binarize_golomb_rice(0, 1);
  CHECK(to_string(gr.prefix) == "0");
  CHECK(to_string(gr.suffix) == "0");
  gr = binarize_golomb_rice(5, 1);
  CHECK(to_string(gr.prefix) == "110");
  CHECK(to_string(gr.suffix) == "1");
  for (int k = 0; k <= 2; ++k) {
    for (std::uint32_t v = 0; v <= 1000; ++v) {
      if ((v >> k) > static_cast<std::uint32_t>(kMaxUnaryPrefix)) break;
      const auto bins = binarize_golomb_rice(v, k);
      Bits all = bins.prefix;
      all.insert(all.end(), bins.suffix.begin(), bins.suffix.end());
      CHECK(bins.suffix.size() == static_cast<std::size_t>(k));
      BitReader r{all};
      CHECK(debinarize_golomb_rice(r, k) == v);
      CHECK(r.pos == all.size());
    }
  }
}

TEST_CASE("golomb-rice prefix limit flags corruption") {
  Bits ones(kMaxUnaryPrefix + 2, 1);
  BitReader r{ones};
  CHECK_THROWS_AS(debinarize_golomb_rice(r, 1), FormatError);
}

TEST_CASE("exp-golomb round trip") {
  CHECK(to_string(binarize_exp_golomb(0, 0)) == "0");
  CHECK(to_string(binarize_exp_golomb(1, 0)) == "100");
  CHECK(to_string(binarize_exp_golomb(2, 0)) == "101");
  CHECK(to_string(binarize_exp_golomb(3, 0)) == "11000");
  for (int k = 0; k <= 2; ++k) {
    for (std::uint32_t v = 0; v < 5000; v += 7) {
      const Bits bits = binarize_exp_golomb(v, k);
      BitReader r{bits};
      CHECK(debinarize_exp_golomb(r, k) == v);
      CHECK(r.pos == bits.size());
    }
  }
}

TEST_CASE("context adaptation follows the shift estimator") {
  ContextModel m;
  CHECK(m.prob_one() == kProbHalf);
  m.update(1);
  CHECK(m.prob_one() == 16384 + ((32768 - 16384) >> 5));
  ContextModel z;
  for (int i = 0; i < 2000; ++i) z.update(0);
  CHECK(z.split(40000) >= 1);  // never an empty sub-interval
}

TEST_CASE("empty stream is terminator only") {
  BinaryEncoder enc;
  CHECK(enc.bit_count() == static_cast<std::size_t>(kRangeBits));
  const auto bytes = enc.finish();
  CHECK(bytes.size() * 8 == enc.bit_count());
  CHECK(bytes.size() == (kRangeBits + 7) / 8);
}

TEST_CASE("bypass bins cost one bit each") {
  for (int n : {1, 7, 64, 1000}) {
    std::mt19937 rng(static_cast<unsigned>(n));
    BinaryEncoder enc;
    for (int i = 0; i < n; ++i) enc.encode_bypass(static_cast<int>(rng() & 1u));
    CHECK(enc.bit_count() == static_cast<std::size_t>(n + kRangeBits));
  }
}

TEST_CASE("bit count is monotone and matches the serialized payload") {
  std::mt19937 rng(7);
  BinaryEncoder enc;
  ContextSet ctx;
  std::size_t last = enc.bit_count();
  for (int i = 0; i < 5000; ++i) {
    if (rng() % 3 == 0) {
      enc.encode_bypass(static_cast<int>(rng() & 1u));
    } else {
      enc.encode_bin(rng() % 10 < 8 ? 1 : 0, ctx[ContextId::kSigFlag]);
    }
    CHECK(enc.bit_count() >= last);
    last = enc.bit_count();
  }
  const std::size_t before = enc.bit_count();
  const auto bytes = enc.finish();
  CHECK(bytes.size() == (before + 7) / 8);
  CHECK(enc.bit_count() == bytes.size() * 8);
}

TEST_CASE("mixed regular and bypass streams round trip") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    std::mt19937 rng(seed);
    BinString bins;
    for (int i = 0; i < 20000; ++i) {
      Bin b;
      const auto kind = rng() % 4;
      if (kind == 0) {
        b.value = static_cast<std::uint8_t>(rng() & 1u);
      } else {
        b.context = static_cast<ContextId>(kind);
        b.value = (rng() % 100) < (kind * 30) ? 1 : 0;
      }
      bins.push_back(b);
    }
    ContextSet enc_ctx;
    BinaryEncoder enc;
    enc.encode_bins(bins, enc_ctx);
    const auto payload = enc.finish();
    ContextSet dec_ctx;
    BinaryDecoder dec(payload);
    const BinString decoded = dec.decode_bins(bins, dec_ctx);
    bool same = true;
    for (std::size_t i = 0; i < bins.size(); ++i) same = same && decoded[i].value == bins[i].value;
    CHECK(same);
    CHECK(enc_ctx == dec_ctx);
    CHECK(dec.bits_consumed() <= payload.size() * 8);
  }
}

TEST_CASE("flipping bypass bins never changes the payload length") {
  std::mt19937 rng(99);
  BinString bins;
  for (int i = 0; i < 4000; ++i) {
    Bin b;
    if (rng() % 2) b.context = ContextId::kIsMpm;
    b.value = static_cast<std::uint8_t>(rng() % 5 == 0);
    bins.push_back(b);
  }
  auto encode = [](const BinString& s) {
    ContextSet ctx;
    BinaryEncoder enc;
    enc.encode_bins(s, ctx);
    return enc.bit_count();
  };
  const auto base = encode(bins);
  for (int trial = 0; trial < 20; ++trial) {
    BinString flipped = bins;
    for (auto& b : flipped) {
      if (!b.context && (rng() & 1u)) b.value ^= 1u;
    }
    CHECK(encode(flipped) == base);
  }
}

TEST_CASE("decoder reports truncation") {
  std::vector<std::uint8_t> one_byte{0xAB};
  CHECK_THROWS_AS(BinaryDecoder{one_byte}, TruncatedError);

  BinaryEncoder enc;
  for (int i = 0; i < 100; ++i) enc.encode_bypass(i & 1);
  auto payload = enc.finish();
  payload.resize(payload.size() / 2);
  BinaryDecoder dec(payload);
  CHECK_THROWS_AS(dec.decode_bypass_bits(60), TruncatedError);
}

TEST_CASE("estimator agrees with the coder on context evolution") {
  std::mt19937 rng(3);
  ContextSet a, b;
  BinaryEncoder enc;
  BitEstimator est;
  for (int i = 0; i < 3000; ++i) {
    const int bin = rng() % 7 == 0;
    enc.encode_bin(bin, a[ContextId::kSplitFlag]);
    est.encode_bin(bin, b[ContextId::kSplitFlag]);
  }
  CHECK(a == b);
  CHECK(est.bits() == doctest::Approx(static_cast<double>(enc.bit_count() - kRangeBits)).epsilon(0.05));
}
