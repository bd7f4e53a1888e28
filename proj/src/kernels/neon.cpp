#include "sevc/kernels.hpp"

#include <arm_neon.h>

#include <cstdlib>

namespace sevc::kernels::neon {

std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  uint32x4_t acc = vdupq_n_u32(0);
  std::uint32_t tail = 0;
  for (int y = 0; y < h; ++y, a += a_stride, b += b_stride) {
    uint16x8_t row = vdupq_n_u16(0);
    int x = 0;
    for (; x + 16 <= w; x += 16) row = vpadalq_u8(row, vabdq_u8(vld1q_u8(a + x), vld1q_u8(b + x)));
    if (x + 8 <= w) {
      row = vaddw_u8(row, vabd_u8(vld1_u8(a + x), vld1_u8(b + x)));
      x += 8;
    }
    acc = vpadalq_u16(acc, row);
    for (; x < w; ++x) tail += static_cast<std::uint32_t>(std::abs(a[x] - b[x]));
  }
  return vaddvq_u32(acc) + tail;
}

std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::uint64_t tail = 0;
  for (int y = 0; y < h; ++y, a += a_stride, b += b_stride) {
    uint32x4_t row = vdupq_n_u32(0);
    int x = 0;
    for (; x + 16 <= w; x += 16) {
      const uint8x16_t d = vabdq_u8(vld1q_u8(a + x), vld1q_u8(b + x));
      row = vpadalq_u16(row, vmull_u8(vget_low_u8(d), vget_low_u8(d)));
      row = vpadalq_u16(row, vmull_u8(vget_high_u8(d), vget_high_u8(d)));
    }
    acc = vpadalq_u32(acc, row);
    for (; x < w; ++x) {
      const int d = a[x] - b[x];
      tail += static_cast<std::uint64_t>(d * d);
    }
  }
  return vaddvq_u64(acc) + tail;
}

}  // namespace sevc::kernels::neon
