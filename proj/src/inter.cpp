#include "sevc/inter.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <tuple>

#include "sevc/kernels.hpp"

namespace sevc {

MotionVector motion_search(const Plane& current, int x, int y, int w, int h,
                           const Plane& reference, int range) {
  const std::uint8_t* block = current.row(y) + x;
  MotionVector best{};
  // (sad, |mvx| + |mvy|, mvy, mvx), compared lexicographically.
  auto key = [](std::uint32_t sad, const MotionVector& mv) {
    return std::make_tuple(sad, std::abs(mv.x) + std::abs(mv.y), mv.y, mv.x);
  };
  auto best_key = std::make_tuple(std::numeric_limits<std::uint32_t>::max(), 0, 0, 0);
  for (int dy = -range; dy <= range; ++dy) {
    const int ry = y + dy;
    if (ry < 0 || ry + h > reference.height()) continue;
    for (int dx = -range; dx <= range; ++dx) {
      const int rx = x + dx;
      if (rx < 0 || rx + w > reference.width()) continue;
      const std::uint32_t sad =
          kernels::sad(block, current.stride(), reference.row(ry) + rx, reference.stride(), w, h);
      const MotionVector mv{dx, dy};
      const auto k = key(sad, mv);
      if (k < best_key) {
        best_key = k;
        best = mv;
      }
    }
  }
  return best;
}

MotionVector compute_mvd(const MotionVector& mv, const MotionVector& predictor) {
  return mv - predictor;
}

MvdSyntax mvd_to_syntax(int mvd) {
  MvdSyntax s;
  const int magnitude = std::abs(mvd);
  s.greater0 = magnitude > 0;
  s.greater1 = magnitude > 1;
  s.abs_minus_2 = s.greater1 ? static_cast<std::uint32_t>(magnitude - 2) : 0u;
  s.sign = mvd < 0;
  return s;
}

int syntax_to_mvd(const MvdSyntax& s) {
  if (!s.greater0) return 0;
  const int magnitude = s.greater1 ? static_cast<int>(s.abs_minus_2) + 2 : 1;
  return s.sign ? -magnitude : magnitude;
}

void predict_inter(const Plane& reference, int x, int y, int w, int h, const MotionVector& mv,
                   std::uint8_t* dst, std::ptrdiff_t stride) {
  const int rx = x + mv.x;
  const int ry = y + mv.y;
  if (rx >= 0 && ry >= 0 && rx + w <= reference.width() && ry + h <= reference.height()) {
    for (int j = 0; j < h; ++j) std::copy_n(reference.row(ry + j) + rx, w, dst + j * stride);
    return;
  }
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) dst[j * stride + i] = reference.clamped(rx + i, ry + j);
  }
}

MotionVector chroma_mv(const MotionVector& luma) { return {luma.x >> 1, luma.y >> 1}; }

}  // namespace sevc
