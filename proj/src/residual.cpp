#include "sevc/residual.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "sevc/media_io.hpp"

namespace sevc {

namespace {

constexpr std::array<std::int64_t, 6> kLevelScale = {40, 45, 51, 57, 64, 72};

int size_index(int size) {
  switch (size) {
    case 4: return 0;
    case 8: return 1;
    case 16: return 2;
    case 32: return 3;
    default: throw Error("unsupported transform size " + std::to_string(size));
  }
}

// 64 * sqrt(2) * cos(j * pi / 64) for j = 0..32, in the hand-tuned integer
// form shared by the HEVC/VVC core transforms.
constexpr std::array<int, 33> kCosTable = {
    91, 90, 90, 90, 89, 88, 87, 85, 83, 82, 80, 78, 75, 73, 70, 67, 64,
    61, 57, 54, 50, 46, 43, 38, 36, 31, 25, 22, 18, 13, 9,  4,  0,
};

int basis_entry(int n, int k, int i) {
  if (k == 0) return 64;
  const int j = (32 / n) * k * (2 * i + 1) % 128;  // angle in units of pi / 64
  if (j <= 32) return kCosTable[static_cast<std::size_t>(j)];
  if (j <= 64) return -kCosTable[static_cast<std::size_t>(64 - j)];
  if (j <= 96) return -kCosTable[static_cast<std::size_t>(j - 64)];
  return kCosTable[static_cast<std::size_t>(128 - j)];
}

struct Tables {
  std::array<std::vector<int>, 4> scans;
  std::array<std::vector<int>, 4> matrices;

  Tables() {
    for (int s = 0; s < 4; ++s) {
      const int n = 4 << s;
      auto& scan = scans[static_cast<std::size_t>(s)];
      for (int d = 0; d <= 2 * (n - 1); ++d) {
        for (int y = std::min(d, n - 1); y >= 0 && d - y < n; --y) scan.push_back(y * n + (d - y));
      }
      auto& m = matrices[static_cast<std::size_t>(s)];
      m.resize(static_cast<std::size_t>(n * n));
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(k * n + i)] = basis_entry(n, k, i);
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

std::int64_t scale_for(int qp) {
  if (qp < 0 || qp > kMaxQp) throw Error("qp out of range: " + std::to_string(qp));
  return kLevelScale[static_cast<std::size_t>(qp % 6)] << (qp / 6);
}

// Division rounding half away from zero.
std::int64_t div_round(std::int64_t num, std::int64_t den) {
  const std::int64_t q = (std::llabs(num) + den / 2) / den;
  return num < 0 ? -q : q;
}

}  // namespace

int CoeffBlock::nonzero_count() const {
  int n = 0;
  for (auto v : levels) n += v != 0;
  return n;
}

const std::vector<int>& diagonal_scan(int size) {
  return tables().scans[static_cast<std::size_t>(size_index(size))];
}

const std::vector<int>& transform_matrix(int size) {
  return tables().matrices[static_cast<std::size_t>(size_index(size))];
}

double quant_step(int qp) { return std::pow(2.0, (qp - 4) / 6.0); }

CoeffBlock transform_quant(std::span<const int> residual, int size, int qp, bool intra) {
  const auto& m = transform_matrix(size);
  const auto& scan = diagonal_scan(size);
  const int n = size;
  if (residual.size() != static_cast<std::size_t>(n * n)) throw Error("residual size mismatch");

  // tmp = M * X, coeff = tmp * M^T
  std::vector<std::int64_t> tmp(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n; ++k) {
    for (int x = 0; x < n; ++x) {
      std::int64_t acc = 0;
      for (int i = 0; i < n; ++i) acc += static_cast<std::int64_t>(m[k * n + i]) * residual[i * n + x];
      tmp[k * n + x] = acc;
    }
  }
  const std::int64_t scale = scale_for(qp);
  const std::int64_t divisor = 64 * static_cast<std::int64_t>(n) * scale;
  const std::int64_t dead_zone = intra ? 3 : 6;

  CoeffBlock out;
  out.size = n;
  out.levels.resize(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      std::int64_t t = 0;
      for (int x = 0; x < n; ++x) t += tmp[k * n + x] * m[l * n + x];
      const std::int64_t level = (dead_zone * std::llabs(t) + divisor) / (dead_zone * divisor);
      out.levels[static_cast<std::size_t>(k * n + l)] = static_cast<std::int32_t>(t < 0 ? -level : level);
    }
  }
  // Reorder raster -> scan.
  std::vector<std::int32_t> scanned(out.levels.size());
  for (std::size_t s = 0; s < scan.size(); ++s) scanned[s] = out.levels[static_cast<std::size_t>(scan[s])];
  out.levels = std::move(scanned);
  return out;
}

std::vector<int> dequant_itransform(const CoeffBlock& coeffs, int qp) {
  const int n = coeffs.size;
  const auto& m = transform_matrix(n);
  const auto& scan = diagonal_scan(n);
  const std::int64_t scale = scale_for(qp);

  std::vector<std::int64_t> y(static_cast<std::size_t>(n * n));
  for (std::size_t s = 0; s < scan.size(); ++s) {
    y[static_cast<std::size_t>(scan[s])] = static_cast<std::int64_t>(coeffs.levels[s]) * scale;
  }
  // X = M^T * Y * M / (2^18 * N)
  std::vector<std::int64_t> tmp(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      std::int64_t acc = 0;
      for (int k = 0; k < n; ++k) acc += static_cast<std::int64_t>(m[k * n + i]) * y[k * n + l];
      tmp[i * n + l] = acc;
    }
  }
  const std::int64_t divisor = (std::int64_t{1} << 18) * n;
  std::vector<int> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::int64_t acc = 0;
      for (int l = 0; l < n; ++l) acc += tmp[i * n + l] * m[l * n + j];
      out[static_cast<std::size_t>(i * n + j)] = static_cast<int>(div_round(acc, divisor));
    }
  }
  return out;
}

SignSplit extract_sign_pattern(const CoeffBlock& coeffs) {
  SignSplit split;
  split.magnitudes.reserve(coeffs.levels.size());
  for (auto v : coeffs.levels) {
    split.magnitudes.push_back(static_cast<std::uint32_t>(std::abs(v)));
    if (v != 0) split.pattern.push_back(v < 0 ? 1 : 0);
  }
  return split;
}

CoeffBlock apply_sign_pattern(std::span<const std::uint32_t> magnitudes, const SignPattern& pattern,
                              int size) {
  CoeffBlock out;
  out.size = size;
  out.levels.resize(magnitudes.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    if (magnitudes[i] == 0) continue;
    if (next >= pattern.size()) throw Error("sign pattern shorter than nonzero count");
    const auto mag = static_cast<std::int32_t>(magnitudes[i]);
    out.levels[i] = pattern[next++] != 0 ? -mag : mag;
  }
  if (next != pattern.size()) throw Error("sign pattern longer than nonzero count");
  return out;
}

}  // namespace sevc
