#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sevc {

inline constexpr int kMinTransformSize = 4;
inline constexpr int kMaxTransformSize = 32;
inline constexpr int kMaxQp = 51;

// Quantized coefficients of one transform block, in diagonal up-right scan
// order.
struct CoeffBlock {
  int size = 0;
  std::vector<std::int32_t> levels;

  int nonzero_count() const;
  bool operator==(const CoeffBlock&) const = default;
};

// One bit per nonzero level in scan order, 1 = negative.
using SignPattern = std::vector<std::uint8_t>;

struct SignSplit {
  SignPattern pattern;
  std::vector<std::uint32_t> magnitudes;  // one per scan position
};

// Raster index of each scan position for an N x N block (N in 4..32).
const std::vector<int>& diagonal_scan(int size);

// Quantizer step 2^((qp - 4) / 6).
double quant_step(int qp);

// Integer DCT-II basis with DC row 64: the HEVC/VVC core transform matrices.
const std::vector<int>& transform_matrix(int size);

// Forward transform and dead-zone quantization of a raster-order residual.
// The rounding offset is step / 3 for intra blocks and step / 6 for inter.
CoeffBlock transform_quant(std::span<const int> residual, int size, int qp, bool intra);

// Dequantization and inverse transform to a raster-order residual. Pure
// integer arithmetic; identical on encoder and decoder.
std::vector<int> dequant_itransform(const CoeffBlock& coeffs, int qp);

SignSplit extract_sign_pattern(const CoeffBlock& coeffs);

// Inverse of extract_sign_pattern. Throws Error if the pattern length does
// not match the number of nonzero magnitudes.
CoeffBlock apply_sign_pattern(std::span<const std::uint32_t> magnitudes, const SignPattern& pattern,
                              int size);

}  // namespace sevc
