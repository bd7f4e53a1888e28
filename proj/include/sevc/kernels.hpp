#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Block-difference kernels used by mode search, motion search and the
// distortion metrics. Each kernel has a portable scalar reference and,
// where the target allows, a vector variant picked once at runtime.
namespace sevc::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// ISA used by the dispatching entry points below.
Isa active_isa();

// Whether `isa` is compiled in and supported by the running CPU.
bool isa_available(Isa isa);

// Forces the dispatch target (tests and benchmarks). Returns false, leaving
// the current target in place, when `isa` is unavailable.
bool force_isa(Isa isa);

// Sum of absolute differences over a w x h block.
std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);

// Sum of squared differences over a w x h block.
std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);

namespace scalar {
std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);
std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);
}  // namespace scalar

#if defined(SEVC_HAVE_AVX2)
namespace avx2 {
std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);
std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);
}  // namespace avx2
#endif

#if defined(SEVC_HAVE_NEON)
namespace neon {
std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);
std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h);
}  // namespace neon
#endif

}  // namespace sevc::kernels
