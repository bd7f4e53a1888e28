#pragma once

#include <cstddef>
#include <cstdint>

#include "sevc/media_io.hpp"

namespace sevc {

// Integer-pel motion vector.
struct MotionVector {
  int x = 0;
  int y = 0;

  bool operator==(const MotionVector&) const = default;
  MotionVector operator+(const MotionVector& o) const { return {x + o.x, y + o.y}; }
  MotionVector operator-(const MotionVector& o) const { return {x - o.x, y - o.y}; }
};

inline constexpr int kDefaultSearchRange = 8;
inline constexpr int kMvdRiceParam = 1;

// Per-component MVD signalling.
//   |v| == 0  <=> !greater0
//   |v| == 1  <=> greater0 && !greater1
//   |v| >= 2  <=> greater1 && abs_minus_2 == |v| - 2
// sign (1 = negative) is present iff greater0.
struct MvdSyntax {
  bool greater0 = false;
  bool greater1 = false;
  std::uint32_t abs_minus_2 = 0;
  bool sign = false;

  bool operator==(const MvdSyntax&) const = default;
};

// Full search over [-range, range]^2 minimising SAD of the w x h block at
// (x, y) of `current` against `reference`. Candidates must lie inside the
// reference plane. Ties prefer smaller |mvx| + |mvy|, then smaller mvy, then
// smaller mvx.
MotionVector motion_search(const Plane& current, int x, int y, int w, int h,
                           const Plane& reference, int range);

MotionVector compute_mvd(const MotionVector& mv, const MotionVector& predictor);

MvdSyntax mvd_to_syntax(int mvd);
int syntax_to_mvd(const MvdSyntax& syntax);

// Motion-compensated copy with edge clamping, so any vector is well defined.
void predict_inter(const Plane& reference, int x, int y, int w, int h, const MotionVector& mv,
                   std::uint8_t* dst, std::ptrdiff_t stride);

// Chroma vector for 4:2:0 (floor division by two).
MotionVector chroma_mv(const MotionVector& luma);

}  // namespace sevc
