#include "sevc/kernels.hpp"

#include <atomic>

namespace sevc::kernels {

namespace {

using SadFn = std::uint32_t (*)(const std::uint8_t*, std::ptrdiff_t, const std::uint8_t*,
                                std::ptrdiff_t, int, int);
using SseFn = std::uint64_t (*)(const std::uint8_t*, std::ptrdiff_t, const std::uint8_t*,
                                std::ptrdiff_t, int, int);

struct Table {
  Isa isa;
  SadFn sad;
  SseFn sse;
};

constexpr Table kScalarTable{Isa::kScalar, &scalar::sad, &scalar::sse};
#if defined(SEVC_HAVE_AVX2)
constexpr Table kAvx2Table{Isa::kAvx2, &avx2::sad, &avx2::sse};
#endif
#if defined(SEVC_HAVE_NEON)
constexpr Table kNeonTable{Isa::kNeon, &neon::sad, &neon::sse};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalarTable;
    case Isa::kAvx2:
#if defined(SEVC_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &kAvx2Table;
#endif
      return nullptr;
    case Isa::kNeon:
#if defined(SEVC_HAVE_NEON)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Table* detect() {
  if (const Table* t = table_for(Isa::kAvx2)) return t;
  if (const Table* t = table_for(Isa::kNeon)) return t;
  return &kScalarTable;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{detect()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

Isa active_isa() { return current().load(std::memory_order_relaxed)->isa; }

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

bool force_isa(Isa isa) {
  const Table* t = table_for(isa);
  if (t == nullptr) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

std::uint32_t sad(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  return current().load(std::memory_order_relaxed)->sad(a, a_stride, b, b_stride, w, h);
}

std::uint64_t sse(const std::uint8_t* a, std::ptrdiff_t a_stride, const std::uint8_t* b,
                  std::ptrdiff_t b_stride, int w, int h) {
  return current().load(std::memory_order_relaxed)->sse(a, a_stride, b, b_stride, w, h);
}

}  // namespace sevc::kernels
