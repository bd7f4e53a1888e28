#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sevc/media_io.hpp"

namespace sevc {

// Intra modes: 0 planar, 1 DC, 2..66 angular (18 horizontal, 50 vertical).
inline constexpr int kNumIntraModes = 67;
inline constexpr int kPlanarMode = 0;
inline constexpr int kDcMode = 1;
inline constexpr int kHorizontalMode = 18;
inline constexpr int kDiagonalMode = 34;
inline constexpr int kVerticalMode = 50;

inline constexpr int kNumMpm = 6;
inline constexpr int kNumRemainingModes = kNumIntraModes - kNumMpm;  // 61
inline constexpr int kMaxMpmIndex = kNumMpm - 1;
inline constexpr int kMaxRemMode = kNumRemainingModes - 1;
inline constexpr int kRemModeBits = 6;

using MpmList = std::array<int, kNumMpm>;

// Luma intra mode signalling. Exactly one of mpm_index / rem_mode is live.
struct IpmSyntax {
  bool is_mpm = true;
  int mpm_index = 0;  // [0, 5]
  int rem_mode = 0;   // [0, 60]

  bool operator==(const IpmSyntax&) const = default;
};

// Six distinct candidates: planar, then left and above (when present), then
// the +-1 angular neighbours of each appended angular mode, then the default
// fill {0, 1, 50, 18, 46, 54}. Duplicates are skipped throughout.
MpmList build_mpm_list(std::optional<int> above, std::optional<int> left);

IpmSyntax mode_to_syntax(int mode, const MpmList& mpm);

// Inverse of mode_to_syntax. Throws FormatError for out-of-range fields.
int syntax_to_mode(const IpmSyntax& syntax, const MpmList& mpm);

// Reference samples around an N x N block. top[0] and left[0] are the corner
// sample; top[1 + i] is (x + i, y - 1) and left[1 + i] is (x - 1, y + i) for
// i in [0, 2N).
struct IntraReferences {
  int size = 0;
  std::vector<int> top;
  std::vector<int> left;

  static IntraReferences uniform(int size, int value);
};

// Gathers references from `plane`. Samples for which `available(x, y)` is
// false are substituted from the nearest available sample in the scan from
// bottom-left to top-right; with nothing available all references are 128.
IntraReferences build_intra_references(const Plane& plane, int x, int y, int size,
                                       const std::function<bool(int, int)>& available);

// Writes the size x size prediction into dst.
void predict_intra(const IntraReferences& refs, int mode, std::uint8_t* dst, std::ptrdiff_t stride);
std::vector<std::uint8_t> predict_intra(const IntraReferences& refs, int mode);

// Per-mode angle in 1/32 sample units (modes 2..66).
int intra_pred_angle(int mode);

struct IntraChoice {
  int mode = kPlanarMode;
  IpmSyntax syntax;
  std::uint32_t sad = 0;
};

// Exhaustive SAD search over all 67 modes; ties resolve to the lowest index.
IntraChoice select_intra_mode(const std::uint8_t* block, std::ptrdiff_t stride,
                              const IntraReferences& refs, const MpmList& mpm);

}  // namespace sevc
