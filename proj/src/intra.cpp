#include "sevc/intra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sevc/kernels.hpp"

namespace sevc {

namespace {

constexpr std::array<int, kNumIntraModes> kAngleTable = {
    0,   0,                                                                  // planar, DC
    32,  29,  26,  23,  20,  18,  16,  14,  12,  10,  8,   6,   4,  3,  2,  1,  0,  // 2..18
    -1,  -2,  -3,  -4,  -6,  -8,  -10, -12, -14, -16, -18, -20, -23, -26, -29, -32,  // 19..34
    -29, -26, -23, -20, -18, -16, -14, -12, -10, -8,  -6,  -4,  -3,  -2,  -1,  0,    // 35..50
    1,   2,   3,   4,   6,   8,   10,  12,  14,  16,  18,  20,  23,  26,  29,  32,   // 51..66
};

constexpr MpmList kDefaultMpm = {kPlanarMode, kDcMode, kVerticalMode, kHorizontalMode, 46, 54};

bool is_angular(int mode) { return mode >= 2 && mode < kNumIntraModes; }

int log2_of(int size) {
  int l = 0;
  while ((1 << l) < size) ++l;
  return l;
}

}  // namespace

int intra_pred_angle(int mode) { return kAngleTable.at(static_cast<std::size_t>(mode)); }

MpmList build_mpm_list(std::optional<int> above, std::optional<int> left) {
  MpmList list{};
  int count = 0;
  auto push = [&](int mode) {
    if (count == kNumMpm) return;
    for (int i = 0; i < count; ++i) {
      if (list[static_cast<std::size_t>(i)] == mode) return;
    }
    list[static_cast<std::size_t>(count++)] = mode;
  };

  push(kPlanarMode);
  std::array<int, 2> neighbours{};
  int num_neighbours = 0;
  for (const auto& m : {left, above}) {
    if (m && *m >= 0 && *m < kNumIntraModes) {
      push(*m);
      neighbours[static_cast<std::size_t>(num_neighbours++)] = *m;
    }
  }
  for (int i = 0; i < num_neighbours; ++i) {
    const int m = neighbours[static_cast<std::size_t>(i)];
    if (!is_angular(m)) continue;
    push(((m - 2 - 1 + 65) % 65) + 2);
    push(((m - 2 + 1) % 65) + 2);
  }
  for (int m : kDefaultMpm) push(m);
  return list;
}

IpmSyntax mode_to_syntax(int mode, const MpmList& mpm) {
  IpmSyntax s;
  const auto it = std::find(mpm.begin(), mpm.end(), mode);
  if (it != mpm.end()) {
    s.is_mpm = true;
    s.mpm_index = static_cast<int>(it - mpm.begin());
    return s;
  }
  s.is_mpm = false;
  int rank = 0;
  for (int m = 0; m < mode; ++m) {
    if (std::find(mpm.begin(), mpm.end(), m) == mpm.end()) ++rank;
  }
  s.rem_mode = rank;
  return s;
}

int syntax_to_mode(const IpmSyntax& syntax, const MpmList& mpm) {
  if (syntax.is_mpm) {
    if (syntax.mpm_index < 0 || syntax.mpm_index > kMaxMpmIndex) {
      throw FormatError("mpm_index out of range: " + std::to_string(syntax.mpm_index));
    }
    return mpm[static_cast<std::size_t>(syntax.mpm_index)];
  }
  if (syntax.rem_mode < 0 || syntax.rem_mode > kMaxRemMode) {
    throw FormatError("rem_mode out of range: " + std::to_string(syntax.rem_mode));
  }
  int rank = syntax.rem_mode;
  for (int m = 0; m < kNumIntraModes; ++m) {
    if (std::find(mpm.begin(), mpm.end(), m) != mpm.end()) continue;
    if (rank-- == 0) return m;
  }
  throw FormatError("rem_mode does not map to a mode");
}

IntraReferences IntraReferences::uniform(int size, int value) {
  IntraReferences r;
  r.size = size;
  r.top.assign(static_cast<std::size_t>(2 * size + 1), value);
  r.left.assign(static_cast<std::size_t>(2 * size + 1), value);
  return r;
}

IntraReferences build_intra_references(const Plane& plane, int x, int y, int size,
                                       const std::function<bool(int, int)>& available) {
  const int n2 = 2 * size;
  // Scan order: left column bottom to top, corner, top row left to right.
  std::vector<int> scan(static_cast<std::size_t>(2 * n2 + 1));
  std::vector<bool> ok(scan.size());
  auto sample = [&](int sx, int sy, std::size_t idx) {
    const bool inside = sx >= 0 && sy >= 0 && sx < plane.width() && sy < plane.height();
    ok[idx] = inside && available(sx, sy);
    scan[idx] = ok[idx] ? plane.at(sx, sy) : 0;
  };
  for (int i = 0; i < n2; ++i) sample(x - 1, y + n2 - 1 - i, static_cast<std::size_t>(i));
  sample(x - 1, y - 1, static_cast<std::size_t>(n2));
  for (int i = 0; i < n2; ++i) sample(x + i, y - 1, static_cast<std::size_t>(n2 + 1 + i));

  const auto first = std::find(ok.begin(), ok.end(), true);
  if (first == ok.end()) return IntraReferences::uniform(size, 128);
  int last = scan[static_cast<std::size_t>(first - ok.begin())];
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (ok[i]) {
      last = scan[i];
    } else {
      scan[i] = last;
    }
  }

  IntraReferences r;
  r.size = size;
  r.top.resize(static_cast<std::size_t>(n2 + 1));
  r.left.resize(static_cast<std::size_t>(n2 + 1));
  r.top[0] = r.left[0] = scan[static_cast<std::size_t>(n2)];
  for (int i = 0; i < n2; ++i) {
    r.left[static_cast<std::size_t>(1 + i)] = scan[static_cast<std::size_t>(n2 - 1 - i)];
    r.top[static_cast<std::size_t>(1 + i)] = scan[static_cast<std::size_t>(n2 + 1 + i)];
  }
  return r;
}

namespace {

void predict_planar(const IntraReferences& r, std::uint8_t* dst, std::ptrdiff_t stride) {
  const int n = r.size;
  const int shift = log2_of(n) + 1;
  const int top_right = r.top[static_cast<std::size_t>(n + 1)];
  const int bottom_left = r.left[static_cast<std::size_t>(n + 1)];
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int v = (n - 1 - x) * r.left[static_cast<std::size_t>(y + 1)] + (x + 1) * top_right +
                    (n - 1 - y) * r.top[static_cast<std::size_t>(x + 1)] + (y + 1) * bottom_left + n;
      dst[y * stride + x] = static_cast<std::uint8_t>(v >> shift);
    }
  }
}

void predict_dc(const IntraReferences& r, std::uint8_t* dst, std::ptrdiff_t stride) {
  const int n = r.size;
  int sum = 0;
  for (int i = 1; i <= n; ++i) sum += r.top[static_cast<std::size_t>(i)] + r.left[static_cast<std::size_t>(i)];
  const auto dc = static_cast<std::uint8_t>((sum + n) >> (log2_of(n) + 1));
  for (int y = 0; y < n; ++y) std::fill_n(dst + y * stride, n, dc);
}

void predict_angular(const IntraReferences& r, int mode, std::uint8_t* dst, std::ptrdiff_t stride) {
  const int n = r.size;
  const bool vertical = mode >= kDiagonalMode;
  const std::vector<int>& main = vertical ? r.top : r.left;
  const std::vector<int>& side = vertical ? r.left : r.top;
  const int angle = kAngleTable[static_cast<std::size_t>(mode)];

  // ref[k] lives at buf[k + n], k in [-n, 2n + 1].
  std::vector<int> buf(static_cast<std::size_t>(3 * n + 2));
  int* ref = buf.data() + n;
  for (int k = 0; k <= 2 * n; ++k) ref[k] = main[static_cast<std::size_t>(k)];
  ref[2 * n + 1] = ref[2 * n];
  const int last = (n * angle) >> 5;
  if (angle < 0 && last < -1) {
    const int inv_angle = static_cast<int>(std::lround(8192.0 / angle));
    for (int k = last; k <= -1; ++k) {
      const int idx = std::min((k * inv_angle + 128) >> 8, 2 * n);
      ref[k] = side[static_cast<std::size_t>(idx)];
    }
  }

  for (int j = 0; j < n; ++j) {
    const int pos = (j + 1) * angle;
    const int idx = pos >> 5;
    const int fact = pos & 31;
    for (int i = 0; i < n; ++i) {
      int v;
      if (fact == 0) {
        v = ref[i + idx + 1];
      } else {
        v = ((32 - fact) * ref[i + idx + 1] + fact * ref[i + idx + 2] + 16) >> 5;
      }
      if (vertical) {
        dst[j * stride + i] = static_cast<std::uint8_t>(v);
      } else {
        dst[i * stride + j] = static_cast<std::uint8_t>(v);
      }
    }
  }
}

}  // namespace

void predict_intra(const IntraReferences& refs, int mode, std::uint8_t* dst, std::ptrdiff_t stride) {
  if (mode == kPlanarMode) {
    predict_planar(refs, dst, stride);
  } else if (mode == kDcMode) {
    predict_dc(refs, dst, stride);
  } else {
    predict_angular(refs, mode, dst, stride);
  }
}

std::vector<std::uint8_t> predict_intra(const IntraReferences& refs, int mode) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(refs.size * refs.size));
  predict_intra(refs, mode, out.data(), refs.size);
  return out;
}

IntraChoice select_intra_mode(const std::uint8_t* block, std::ptrdiff_t stride,
                              const IntraReferences& refs, const MpmList& mpm) {
  const int n = refs.size;
  std::vector<std::uint8_t> pred(static_cast<std::size_t>(n * n));
  IntraChoice best;
  bool have = false;
  for (int mode = 0; mode < kNumIntraModes; ++mode) {
    predict_intra(refs, mode, pred.data(), n);
    const std::uint32_t cost = kernels::sad(block, stride, pred.data(), n, n, n);
    if (!have || cost < best.sad) {
      best.mode = mode;
      best.sad = cost;
      have = true;
    }
  }
  best.syntax = mode_to_syntax(best.mode, mpm);
  return best;
}

}  // namespace sevc
