#include "sevc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "sevc/kernels.hpp"

namespace sevc {

namespace {

void check_same_window(const FrameBuffer& ref, const FrameBuffer& test) {
  if (ref.display_width != test.display_width || ref.display_height != test.display_height) {
    throw Error("frame dimensions differ (" + std::to_string(ref.display_width) + "x" +
                std::to_string(ref.display_height) + " vs " + std::to_string(test.display_width) +
                "x" + std::to_string(test.display_height) + ")");
  }
}

void check_plane_window(const Plane& ref, const Plane& test, int width, int height) {
  if (width <= 0 || height <= 0 || ref.width() < width || ref.height() < height ||
      test.width() < width || test.height() < height) {
    throw Error("plane smaller than the compared window");
  }
}

}  // namespace

double psnr(const Plane& ref, const Plane& test, int width, int height) {
  check_plane_window(ref, test, width, height);
  const std::uint64_t sse = kernels::sse(ref.row(0), ref.stride(), test.row(0), test.stride(), width, height);
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(sse) / (static_cast<double>(width) * height);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double psnr(const FrameBuffer& ref, const FrameBuffer& test) {
  check_same_window(ref, test);
  return psnr(ref.y, test.y, ref.display_width, ref.display_height);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double centre = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - centre;
    k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Valid-region separable filter of a width x height image.
std::vector<double> filter_valid(const std::vector<double>& img, int width, int height,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = width - n + 1;
  const int oh = height - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[static_cast<std::size_t>(i)] * img[static_cast<std::size_t>(y) * width + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double ssim(const Plane& ref, const Plane& test, int width, int height, const SsimParams& p) {
  check_plane_window(ref, test, width, height);
  if (width < p.window || height < p.window) {
    throw Error("frame smaller than the " + std::to_string(p.window) + "x" + std::to_string(p.window) +
                " SSIM window");
  }
  const auto k = gaussian_kernel(p.window, p.sigma);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> a(count), b(count), aa(count), bb(count), ab(count);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const double va = ref.at(x, y);
      const double vb = test.at(x, y);
      a[i] = va;
      b[i] = vb;
      aa[i] = va * va;
      bb[i] = vb * vb;
      ab[i] = va * vb;
    }
  }
  const auto mu_a = filter_valid(a, width, height, k);
  const auto mu_b = filter_valid(b, width, height, k);
  const auto e_aa = filter_valid(aa, width, height, k);
  const auto e_bb = filter_valid(bb, width, height, k);
  const auto e_ab = filter_valid(ab, width, height, k);

  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

double ssim(const FrameBuffer& ref, const FrameBuffer& test, const SsimParams& params) {
  check_same_window(ref, test);
  return ssim(ref.y, test.y, ref.display_width, ref.display_height, params);
}

// ---------------------------------------------------------------------------

std::size_t EdgeMap::edge_count() const {
  std::size_t n = 0;
  for (auto v : values) n += v;
  return n;
}

EdgeMap edge_map(const Plane& plane, int width, int height, const EdgeDetectorParams& params) {
  if (width <= 0 || height <= 0 || plane.width() < width || plane.height() < height) {
    throw Error("edge map window exceeds plane");
  }
  EdgeMap map;
  map.width = width;
  map.height = height;
  map.params = params;
  map.values.resize(static_cast<std::size_t>(width) * height);
  auto px = [&](int x, int y) -> int {
    return plane.at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
  };
  // |g| / 4 >= t  <=>  gx^2 + gy^2 >= (4t)^2
  const long long limit = 16LL * params.threshold * params.threshold;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const int gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      const long long mag2 = static_cast<long long>(gx) * gx + static_cast<long long>(gy) * gy;
      map.values[static_cast<std::size_t>(y) * width + x] = mag2 >= limit ? 1 : 0;
    }
  }
  return map;
}

double edr(const EdgeMap& original, const EdgeMap& encrypted) {
  if (original.width != encrypted.width || original.height != encrypted.height) {
    throw Error("edge maps differ in size");
  }
  std::uint64_t num = 0;
  std::uint64_t den = 0;
  for (std::size_t i = 0; i < original.values.size(); ++i) {
    const int p = original.values[i];
    const int q = encrypted.values[i];
    num += static_cast<std::uint64_t>(std::abs(p - q));
    den += static_cast<std::uint64_t>(p + q);
  }
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double edr(const FrameBuffer& ref, const FrameBuffer& test, const EdgeDetectorParams& params) {
  check_same_window(ref, test);
  return edr(edge_map(ref.y, ref.display_width, ref.display_height, params),
             edge_map(test.y, test.display_width, test.display_height, params));
}

// ---------------------------------------------------------------------------

double bitrate_change(std::uint64_t bits_plain, std::uint64_t bits_encrypted) {
  if (bits_plain == 0) throw Error("bitrate change needs a nonzero baseline");
  return (static_cast<double>(bits_encrypted) - static_cast<double>(bits_plain)) /
         static_cast<double>(bits_plain);
}

EncryptionSpace encryption_space(const EncryptionLedger& ledger) {
  EncryptionSpace space;
  for (ElementClass c : kAllElementClasses) {
    space.per_class[static_cast<std::size_t>(c)] = ledger.total(c);
    space.total += ledger.total(c);
  }
  return space;
}

std::vector<FrameMetrics> compare_sequences(std::span<const FrameBuffer> ref,
                                            std::span<const FrameBuffer> test,
                                            const EdgeDetectorParams& edge) {
  if (ref.size() != test.size()) throw Error("sequences differ in frame count");
  std::vector<FrameMetrics> rows;
  rows.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    rows.push_back({static_cast<int>(i), psnr(ref[i], test[i]), ssim(ref[i], test[i]),
                    edr(ref[i], test[i], edge)});
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, std::span<const FrameMetrics> rows) {
  out << "frame,psnr_db,ssim,edr\n";
  char buf[128];
  for (const auto& r : rows) {
    const double p = std::isinf(r.psnr_db) ? kPsnrCsvCap : r.psnr_db;
    std::snprintf(buf, sizeof buf, "%d,%.4f,%.6f,%.6f\n", r.frame, p, r.ssim, r.edr);
    out << buf;
  }
}

void write_report_csv(std::ostream& out, double bitrate_delta, const EncryptionSpace& space) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "bitrate_delta,%.6f\n", bitrate_delta);
  out << buf;
  for (ElementClass c : kAllElementClasses) {
    const auto& e = space.per_class[static_cast<std::size_t>(c)];
    out << "enc_space," << element_class_name(c) << ',' << e.elements << ',' << e.bits << '\n';
  }
  out << "enc_space,total," << space.total.elements << ',' << space.total.bits << '\n';
}

}  // namespace sevc
