#include "sevc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sevc {

namespace {

constexpr std::uint32_t kQuarter = 1u << (kRangeBits - 1);  // renormalization threshold
constexpr std::uint32_t kHalf = 1u << kRangeBits;
constexpr std::uint32_t kFull = 1u << (kRangeBits + 1);
constexpr std::uint32_t kInitialRange = (1u << kRangeBits) - 2;

}  // namespace

Bits binarize_truncated_unary(int v, int c_max) {
  if (v < 0 || v > c_max) {
    throw Error("truncated unary value " + std::to_string(v) + " outside [0, " +
                std::to_string(c_max) + "]");
  }
  Bits bits(static_cast<std::size_t>(v), 1);
  if (v < c_max) bits.push_back(0);
  return bits;
}

Bits binarize_fixed_length(std::uint32_t v, int n) {
  if (n < 0 || n > 32 || (n < 32 && (static_cast<std::uint64_t>(v) >> n) != 0)) {
    throw Error("fixed-length value " + std::to_string(v) + " does not fit in " +
                std::to_string(n) + " bits");
  }
  Bits bits(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = (v >> (n - 1 - i)) & 1u;
  return bits;
}

GolombRiceBins binarize_golomb_rice(std::uint32_t v, int k) {
  if (k < 0 || k > 16) throw Error("rice parameter out of range");
  GolombRiceBins out;
  const std::uint32_t q = v >> k;
  out.prefix.assign(q, 1);
  out.prefix.push_back(0);
  out.suffix = binarize_fixed_length(v & ((1u << k) - 1u), k);
  return out;
}

Bits binarize_exp_golomb(std::uint32_t v, int k) {
  Bits bits;
  std::uint64_t value = v;
  while (value >= (1ull << k)) {
    bits.push_back(1);
    value -= 1ull << k;
    ++k;
  }
  bits.push_back(0);
  for (int i = k - 1; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  return bits;
}

// ---------------------------------------------------------------------------

BinaryEncoder::BinaryEncoder() : range_(kInitialRange) {}

void BinaryEncoder::write_bit(int bit) {
  if ((bits_written_ & 7u) == 0) bytes_.push_back(0);
  if (bit != 0) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_written_ & 7u));
  ++bits_written_;
}

void BinaryEncoder::put_bit(int bit) {
  if (first_bit_) {
    first_bit_ = false;
  } else {
    write_bit(bit);
  }
  for (; outstanding_ > 0; --outstanding_) write_bit(1 - bit);
}

void BinaryEncoder::renormalize() {
  while (range_ < kQuarter) {
    if (low_ < kQuarter) {
      put_bit(0);
    } else if (low_ >= kHalf) {
      low_ -= kHalf;
      put_bit(1);
    } else {
      low_ -= kQuarter;
      ++outstanding_;
    }
    range_ <<= 1;
    low_ <<= 1;
    ++shifts_;
  }
}

void BinaryEncoder::encode_bin(int bin, ContextModel& ctx) {
  if (finished_) throw Error("encode after finish");
  const std::uint32_t r1 = ctx.split(range_);
  if (bin != 0) {
    range_ = r1;
  } else {
    low_ += r1;
    range_ -= r1;
  }
  ctx.update(bin);
  renormalize();
}

void BinaryEncoder::encode_bypass(int bin) {
  if (finished_) throw Error("encode after finish");
  low_ <<= 1;
  if (bin != 0) low_ += range_;
  if (low_ >= kFull) {
    low_ -= kFull;
    put_bit(1);
  } else if (low_ < kHalf) {
    put_bit(0);
  } else {
    low_ -= kHalf;
    ++outstanding_;
  }
  ++shifts_;
}

void BinaryEncoder::encode_bypass_bits(std::uint64_t value, int n) {
  for (int i = n - 1; i >= 0; --i) encode_bypass(static_cast<int>((value >> i) & 1u));
}

void BinaryEncoder::encode_bins(const BinString& bins, ContextSet& contexts) {
  for (const Bin& b : bins) {
    if (b.context) {
      encode_bin(b.value, contexts[*b.context]);
    } else {
      encode_bypass(b.value);
    }
  }
}

std::size_t BinaryEncoder::bit_count() const {
  if (finished_) return bytes_.size() * 8;
  // Flush: kRangeBits - 2 renormalization shifts plus three explicit bits,
  // minus the suppressed leading bit.
  return static_cast<std::size_t>(shifts_) + kRangeBits;
}

std::vector<std::uint8_t> BinaryEncoder::finish() {
  if (finished_) throw Error("coder already finished");
  range_ -= 2;
  low_ += range_;
  range_ = 2;
  renormalize();
  put_bit(static_cast<int>((low_ >> kRangeBits) & 1u));
  const std::uint32_t tail = ((low_ >> (kRangeBits - 2)) & 3u) | 1u;
  write_bit(static_cast<int>(tail >> 1));
  write_bit(static_cast<int>(tail & 1u));
  finished_ = true;
  return bytes_;
}

// ---------------------------------------------------------------------------

BinaryDecoder::BinaryDecoder(std::span<const std::uint8_t> payload)
    : payload_(payload), range_(kInitialRange) {
  for (int i = 0; i < kRangeBits; ++i) offset_ = (offset_ << 1) | static_cast<std::uint32_t>(read_bit());
}

int BinaryDecoder::read_bit() {
  if (bit_pos_ >= payload_.size() * 8) throw TruncatedError("arithmetic decoder ran past end of payload");
  const int bit = (payload_[bit_pos_ >> 3] >> (7 - (bit_pos_ & 7))) & 1;
  ++bit_pos_;
  return bit;
}

int BinaryDecoder::decode_bin(ContextModel& ctx) {
  const std::uint32_t r1 = ctx.split(range_);
  int bin;
  if (offset_ < r1) {
    bin = 1;
    range_ = r1;
  } else {
    bin = 0;
    offset_ -= r1;
    range_ -= r1;
  }
  ctx.update(bin);
  while (range_ < kQuarter) {
    range_ <<= 1;
    offset_ = (offset_ << 1) | static_cast<std::uint32_t>(read_bit());
  }
  return bin;
}

int BinaryDecoder::decode_bypass() {
  offset_ = (offset_ << 1) | static_cast<std::uint32_t>(read_bit());
  if (offset_ >= range_) {
    offset_ -= range_;
    return 1;
  }
  return 0;
}

std::uint64_t BinaryDecoder::decode_bypass_bits(int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v = (v << 1) | static_cast<std::uint64_t>(decode_bypass());
  return v;
}

BinString BinaryDecoder::decode_bins(const BinString& layout, ContextSet& contexts) {
  BinString out;
  out.reserve(layout.size());
  for (const Bin& b : layout) {
    const int v = b.context ? decode_bin(contexts[*b.context]) : decode_bypass();
    out.push_back(Bin{static_cast<std::uint8_t>(v), b.context});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct CostTable {
  static constexpr int kSize = 1 << 9;
  std::array<double, kSize> bits{};
  CostTable() {
    for (int i = 0; i < kSize; ++i) {
      const double p = (static_cast<double>(i) + 0.5) / kSize;
      bits[static_cast<std::size_t>(i)] = -std::log2(p);
    }
  }
};

const CostTable& cost_table() {
  static const CostTable table;
  return table;
}

}  // namespace

double bin_cost(const ContextModel& ctx, int bin) {
  const int p1 = ctx.prob_one();
  const int p = bin != 0 ? p1 : (1 << kProbBits) - p1;
  const int idx = std::min(p >> (kProbBits - 9), CostTable::kSize - 1);
  return cost_table().bits[static_cast<std::size_t>(idx)];
}

void BitEstimator::encode_bin(int bin, ContextModel& ctx) {
  bits_ += bin_cost(ctx, bin);
  ctx.update(bin);
}

}  // namespace sevc
