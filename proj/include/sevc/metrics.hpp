#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "sevc/ledger.hpp"
#include "sevc/media_io.hpp"

namespace sevc {

// Written to CSV in place of an infinite PSNR.
inline constexpr double kPsnrCsvCap = 99.99;

// Luma PSNR over the display window, 10 log10(255^2 / MSE); +infinity when
// the planes are identical. Throws Error on a size mismatch.
double psnr(const FrameBuffer& ref, const FrameBuffer& test);
double psnr(const Plane& ref, const Plane& test, int width, int height);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

// Mean SSIM over every fully contained Gaussian window on the luma display
// window. Throws Error when the frame is smaller than the window.
double ssim(const FrameBuffer& ref, const FrameBuffer& test, const SsimParams& params = {});
double ssim(const Plane& ref, const Plane& test, int width, int height, const SsimParams& params = {});

struct EdgeDetectorParams {
  // Edge iff the Sobel gradient magnitude, divided by the kernel gain of 4,
  // is >= threshold.
  int threshold = 64;
};

struct EdgeMap {
  int width = 0;
  int height = 0;
  EdgeDetectorParams params;
  std::vector<std::uint8_t> values;  // 0 or 1, row-major

  std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t edge_count() const;
};

// Sobel 3x3 with edge-replicated borders.
EdgeMap edge_map(const Plane& plane, int width, int height, const EdgeDetectorParams& params = {});

// Edge differential ratio sum|P - Q| / sum|P + Q| over binary maps; 0 when
// both maps are empty.
double edr(const EdgeMap& original, const EdgeMap& encrypted);
double edr(const FrameBuffer& ref, const FrameBuffer& test, const EdgeDetectorParams& params = {});

// (bits_encrypted - bits_plain) / bits_plain. Throws Error for a zero baseline.
double bitrate_change(std::uint64_t bits_plain, std::uint64_t bits_encrypted);

struct EncryptionSpace {
  std::array<LedgerEntry, 4> per_class{};
  LedgerEntry total;
};
EncryptionSpace encryption_space(const EncryptionLedger& ledger);

struct FrameMetrics {
  int frame = 0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double edr = 0.0;
};

// Per-frame metrics of two equally long sequences.
std::vector<FrameMetrics> compare_sequences(std::span<const FrameBuffer> ref,
                                            std::span<const FrameBuffer> test,
                                            const EdgeDetectorParams& edge = {});

// `frame,psnr_db,ssim,edr` followed by one row per frame.
void write_metrics_csv(std::ostream& out, std::span<const FrameMetrics> rows);

// `bitrate_delta,<ratio>` then `enc_space,<class>,<elements>,<bits>` for each
// class and the total.
void write_report_csv(std::ostream& out, double bitrate_delta, const EncryptionSpace& space);

}  // namespace sevc
