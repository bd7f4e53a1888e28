#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sevc/codec.hpp"

namespace sevc::detail {

// Per-frame coding state shared by encoder and decoder: which samples count
// as already coded, and the luma intra mode of each 4x4 unit.
class CodingMap {
 public:
  CodingMap(int width, int height, int ctu_size);

  // True if the luma sample (sx, sy) is coded before the block whose
  // top-left sample is (bx, by).
  bool available(int sx, int sy, int bx, int by) const;

  // Intra mode of the neighbour at (sx, sy) when it is available and intra.
  std::optional<int> neighbour_mode(int sx, int sy, int bx, int by) const;

  void set_mode(const CuRect& rect, int mode);  // -1 for inter

  MpmList mpm_list(const CuRect& rect) const;

 private:
  int width_;
  int height_;
  int ctu_size_;
  int ctus_per_row_;
  int units_per_row_;
  std::vector<std::int8_t> modes_;
};

IntraReferences intra_references(const FrameBuffer& picture, int component, const CuRect& cu,
                                 const CodingMap& map);

// Prediction of one component of a CU, raster order. Chroma intra uses DC.
std::vector<std::uint8_t> intra_prediction(const FrameBuffer& picture, int component, const CuRect& cu,
                                           int luma_mode, const CodingMap& map);
std::vector<std::uint8_t> inter_prediction(const FrameBuffer& reference, int component, const CuRect& cu,
                                           const MotionVector& mv);

// Adds the decoded residual of each transform tile to `pred`, clipped to
// 8 bits. Raster order over the CU's component block.
std::vector<std::uint8_t> reconstruct_block(int component, const CuRect& cu, const std::vector<std::uint8_t>& pred,
                                            const std::vector<CoeffBlock>& tus, int qp);

void store_block(FrameBuffer& picture, int component, const CuRect& cu, const std::vector<std::uint8_t>& block);

inline int component_shift(int component) { return component == 0 ? 0 : 1; }

}  // namespace sevc::detail
