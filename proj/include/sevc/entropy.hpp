#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sevc/media_io.hpp"

namespace sevc {

// ---------------------------------------------------------------------------
// Binarization

using Bits = std::vector<std::uint8_t>;

// v ones then a terminating zero; the zero is dropped when v == c_max.
Bits binarize_truncated_unary(int v, int c_max);

// n-bit big-endian representation of v.
Bits binarize_fixed_length(std::uint32_t v, int n);

struct GolombRiceBins {
  Bits prefix;  // unary(v >> k)
  Bits suffix;  // k low bits of v, MSB first
};
GolombRiceBins binarize_golomb_rice(std::uint32_t v, int k);

// Order-k exp-Golomb: prefix of ones, a zero, then (prefix + k) suffix bits.
Bits binarize_exp_golomb(std::uint32_t v, int k);

// De-binarizers pull bits one at a time from `read`, an int() callable.
template <class ReadBit>
int debinarize_truncated_unary(ReadBit&& read, int c_max) {
  int v = 0;
  while (v < c_max && read() != 0) ++v;
  return v;
}

template <class ReadBit>
std::uint32_t debinarize_fixed_length(ReadBit&& read, int n) {
  std::uint32_t v = 0;
  for (int i = 0; i < n; ++i) v = (v << 1) | static_cast<std::uint32_t>(read());
  return v;
}

// Unary prefixes longer than this are treated as stream corruption.
inline constexpr int kMaxUnaryPrefix = 32;

template <class ReadBit>
std::uint32_t debinarize_golomb_rice(ReadBit&& read, int k) {
  std::uint32_t q = 0;
  while (read() != 0) {
    if (++q > kMaxUnaryPrefix) throw FormatError("golomb-rice prefix exceeds limit");
  }
  return (q << k) | debinarize_fixed_length(read, k);
}

template <class ReadBit>
std::uint32_t debinarize_exp_golomb(ReadBit&& read, int k) {
  int extra = 0;
  while (read() != 0) {
    if (++extra > kMaxUnaryPrefix - k) throw FormatError("exp-golomb prefix exceeds limit");
  }
  const int width = extra + k;
  const std::uint32_t base = ((1u << extra) - 1u) << k;
  return base + debinarize_fixed_length(read, width);
}

// ---------------------------------------------------------------------------
// Context modelling

enum class ContextId : std::uint8_t {
  kSplitFlag,
  kIsMpm,
  kPredMode,  // intra/inter flag in P frames
  kMvdGreater0,
  kMvdGreater1,
  kCodedBlockFlag,
  kSigFlag,          // previous coefficient in scan order was zero
  kSigFlagAfterSig,  // previous coefficient was nonzero
  kCount
};

inline constexpr int kProbBits = 15;
inline constexpr std::uint16_t kProbHalf = 1u << (kProbBits - 1);

// Adaptive estimate of P(bin == 1) in 15-bit fixed point.
class ContextModel {
 public:
  std::uint16_t prob_one() const { return p1_; }

  void update(int bin) {
    const int target = bin != 0 ? (1 << kProbBits) : 0;
    p1_ = static_cast<std::uint16_t>(p1_ + ((target - p1_) >> 5));
  }

  // Width of the bin == 1 sub-interval for a coder interval of `range`.
  std::uint32_t split(std::uint32_t range) const {
    std::uint32_t r1 = (range * p1_) >> kProbBits;
    if (r1 < 1) r1 = 1;
    if (r1 > range - 1) r1 = range - 1;
    return r1;
  }

  bool operator==(const ContextModel&) const = default;

 private:
  std::uint16_t p1_ = kProbHalf;
};

class ContextSet {
 public:
  ContextModel& operator[](ContextId id) { return models_[static_cast<std::size_t>(id)]; }
  const ContextModel& operator[](ContextId id) const { return models_[static_cast<std::size_t>(id)]; }
  bool operator==(const ContextSet&) const = default;

 private:
  std::array<ContextModel, static_cast<std::size_t>(ContextId::kCount)> models_{};
};

// One bin with its coding mode: a context for regular bins, none for bypass.
struct Bin {
  std::uint8_t value = 0;
  std::optional<ContextId> context;
};
using BinString = std::vector<Bin>;

// ---------------------------------------------------------------------------
// Binary arithmetic coder
//
// Interval arithmetic with a 16-bit range held in 32-bit registers and
// carry resolution through outstanding bits. The number of emitted bits is
// a function of the range trajectory alone, and bypass bins never touch the
// range, so flipping bypass bins leaves the coded length unchanged.

inline constexpr int kRangeBits = 16;

class BinaryEncoder {
 public:
  BinaryEncoder();

  void encode_bin(int bin, ContextModel& ctx);
  void encode_bypass(int bin);
  // n bits of `value`, MSB first.
  void encode_bypass_bits(std::uint64_t value, int n);
  void encode_bins(const BinString& bins, ContextSet& contexts);

  // Payload size in bits: if finished, the exact byte-padded size;
  // otherwise what finish() would produce before byte padding.
  std::size_t bit_count() const;

  // Flushes the coder; further encoding is an error.
  std::vector<std::uint8_t> finish();

  bool finished() const { return finished_; }

 private:
  void renormalize();
  void put_bit(int bit);
  void write_bit(int bit);

  std::uint32_t low_ = 0;
  std::uint32_t range_;
  std::uint64_t outstanding_ = 0;
  std::uint64_t shifts_ = 0;
  bool first_bit_ = true;
  bool finished_ = false;
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bits_written_ = 0;
};

class BinaryDecoder {
 public:
  // Throws TruncatedError when the payload is too short to prime the coder.
  explicit BinaryDecoder(std::span<const std::uint8_t> payload);

  int decode_bin(ContextModel& ctx);
  int decode_bypass();
  std::uint64_t decode_bypass_bits(int n);
  BinString decode_bins(const BinString& layout, ContextSet& contexts);

  std::size_t bits_consumed() const { return bit_pos_; }

 private:
  int read_bit();

  std::span<const std::uint8_t> payload_;
  std::size_t bit_pos_ = 0;
  std::uint32_t range_;
  std::uint32_t offset_ = 0;
};

// Rate estimator with the encoder's interface: sums ideal code lengths and
// adapts contexts exactly as the encoder would.
class BitEstimator {
 public:
  void encode_bin(int bin, ContextModel& ctx);
  void encode_bypass(int) { bits_ += 1.0; }
  void encode_bypass_bits(std::uint64_t, int n) { bits_ += n; }

  double bits() const { return bits_; }

 private:
  double bits_ = 0.0;
};

// Ideal code length in bits of `bin` under `ctx`.
double bin_cost(const ContextModel& ctx, int bin);

}  // namespace sevc
