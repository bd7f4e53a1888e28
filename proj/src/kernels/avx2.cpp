#include "sevc/kernels.hpp"

#include <immintrin.h>

#include <cstdlib>

namespace sevc::kernels::avx2 {

namespace {

inline std::uint64_t hsum_epi64(__m256i v) {
  const __m128i lo = _mm256_castsi256_si128(v);
  const __m128i hi = _mm256_extracti128_si256(v, 1);
  const __m128i s = _mm_add_epi64(lo, hi);
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

// Squared differences of 16 bytes, widened and pair-summed into 8 x i32.
inline __m256i sq_diff16(const std::uint8_t* a, const std::uint8_t* b) {
  const __m256i va = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a)));
  const __m256i vb = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(b)));
  const __m256i d = _mm256_sub_epi16(va, vb);
  return _mm256_madd_epi16(d, d);
}

}  // namespace

std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  __m256i acc = _mm256_setzero_si256();
  std::uint32_t tail = 0;
  for (int y = 0; y < h; ++y, a += a_stride, b += b_stride) {
    int x = 0;
    for (; x + 32 <= w; x += 32) {
      const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + x));
      const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + x));
      acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, vb));
    }
    if (x + 16 <= w) {
      const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + x));
      const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + x));
      acc = _mm256_add_epi64(acc, _mm256_zextsi128_si256(_mm_sad_epu8(va, vb)));
      x += 16;
    }
    if (x + 8 <= w) {
      const __m128i va = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(a + x));
      const __m128i vb = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(b + x));
      acc = _mm256_add_epi64(acc, _mm256_zextsi128_si256(_mm_sad_epu8(va, vb)));
      x += 8;
    }
    for (; x < w; ++x) tail += static_cast<std::uint32_t>(std::abs(a[x] - b[x]));
  }
  return static_cast<std::uint32_t>(hsum_epi64(acc)) + tail;
}

std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  std::uint64_t total = 0;
  for (int y = 0; y < h; ++y, a += a_stride, b += b_stride) {
    __m256i acc32 = _mm256_setzero_si256();
    int x = 0;
    for (; x + 16 <= w; x += 16) acc32 = _mm256_add_epi32(acc32, sq_diff16(a + x, b + x));
    // 8 lanes x 2 * 255^2 per 16 samples: a row of up to 8192 samples stays
    // below 2^31 per lane.
    const __m256i lo = _mm256_cvtepu32_epi64(_mm256_castsi256_si128(acc32));
    const __m256i hi = _mm256_cvtepu32_epi64(_mm256_extracti128_si256(acc32, 1));
    total += hsum_epi64(_mm256_add_epi64(lo, hi));
    for (; x < w; ++x) {
      const int d = a[x] - b[x];
      total += static_cast<std::uint64_t>(d * d);
    }
  }
  return total;
}

}  // namespace sevc::kernels::avx2
