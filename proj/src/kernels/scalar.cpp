#include "sevc/kernels.hpp"

#include <cstdlib>

namespace sevc::kernels::scalar {

std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  std::uint32_t acc = 0;
  for (int y = 0; y < h; ++y, a += a_stride, b += b_stride) {
    for (int x = 0; x < w; ++x) acc += static_cast<std::uint32_t>(std::abs(a[x] - b[x]));
  }
  return acc;
}

std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  std::uint64_t acc = 0;
  for (int y = 0; y < h; ++y, a += a_stride, b += b_stride) {
    for (int x = 0; x < w; ++x) {
      const int d = a[x] - b[x];
      acc += static_cast<std::uint64_t>(d * d);
    }
  }
  return acc;
}

}  // namespace sevc::kernels::scalar
