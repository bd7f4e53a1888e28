#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sevc/metrics.hpp"

using namespace sevc;

namespace {

FrameBuffer random_frame(std::mt19937& rng, int w, int h) {
  FrameBuffer f(w, h, w, h);
  for (auto& v : f.y.samples()) v = static_cast<std::uint8_t>(rng());
  for (auto& v : f.cb.samples()) v = static_cast<std::uint8_t>(rng());
  for (auto& v : f.cr.samples()) v = static_cast<std::uint8_t>(rng());
  return f;
}

FrameBuffer smooth_frame(std::mt19937& rng, int w, int h) {
  FrameBuffer f(w, h, w, h);
  const double fx = 0.05 + 0.1 * (rng() % 10) / 10.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f.y.at(x, y) = static_cast<std::uint8_t>(128 + 100 * std::sin(fx * x + 0.07 * y));
  }
  return f;
}

}  // namespace

TEST_CASE("psnr of identical and off-by-one frames") {
  std::mt19937 rng(1);
  const auto a = random_frame(rng, 32, 16);
  CHECK(std::isinf(psnr(a, a)));
  auto b = a;
  for (auto& v : b.y.samples()) v = v == 255 ? 254 : static_cast<std::uint8_t>(v + 1);
  CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(255.0 * 255.0)).epsilon(1e-9));
  CHECK(psnr(a, b) == doctest::Approx(48.1308).epsilon(1e-5));
  // Chroma does not count.
  auto c = a;
  c.cb.at(0, 0) ^= 0xFF;
  CHECK(std::isinf(psnr(a, c)));
  CHECK_THROWS_AS(psnr(a, random_frame(rng, 16, 16)), Error);
}

TEST_CASE("psnr looks only at the display window") {
  std::mt19937 rng(2);
  auto a = random_frame(rng, 32, 32);
  a.display_width = 30;
  a.display_height = 30;
  auto b = a;
  b.y.at(31, 31) ^= 0x80;
  CHECK(std::isinf(psnr(a, b)));
}

TEST_CASE("ssim agrees with the direct windowed oracle") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    const int w = 11 + static_cast<int>(rng() % 30);
    const int h = 11 + static_cast<int>(rng() % 20);
    auto a = trial % 2 ? smooth_frame(rng, w, h) : random_frame(rng, w, h);
    auto b = a;
    for (auto& v : b.y.samples()) v = static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + static_cast<int>(rng() % 41) - 20, 0, 255));
    CHECK(ssim(a, b) == doctest::Approx(testing::naive_ssim(a.y, b.y, w, h)).epsilon(1e-6));
  }
}

TEST_CASE("ssim bounds") {
  std::mt19937 rng(4);
  const auto a = random_frame(rng, 48, 48);
  CHECK(ssim(a, a) == doctest::Approx(1.0));
  const auto b = random_frame(rng, 48, 48);
  CHECK(std::abs(ssim(a, b)) < 0.05);
  FrameBuffer small(8, 8, 8, 8);
  CHECK_THROWS_AS(ssim(small, small), Error);
}

TEST_CASE("edge map matches a directly written Sobel") {
  std::mt19937 rng(5);
  for (int threshold : {16, 64, 120}) {
    const auto f = smooth_frame(rng, 40, 24);
    const auto noisy = random_frame(rng, 40, 24);
    for (const auto* frame : {&f, &noisy}) {
      const auto m = edge_map(frame->y, 40, 24, EdgeDetectorParams{threshold});
      CHECK(m.values == testing::naive_edges(frame->y, 40, 24, threshold));
    }
  }
}

TEST_CASE("edge threshold boundary on a vertical step") {
  // A step of height s gives |gx| = 4s, i.e. s after normalisation.
  for (int step : {63, 64}) {
    Plane p(8, 8, 100);
    for (int y = 0; y < 8; ++y) {
      for (int x = 4; x < 8; ++x) p.at(x, y) = static_cast<std::uint8_t>(100 + step);
    }
    const auto m = edge_map(p, 8, 8);
    CHECK(m.at(3, 4) == (step >= 64 ? 1 : 0));
    CHECK(m.at(4, 4) == (step >= 64 ? 1 : 0));
    CHECK(m.at(1, 4) == 0);
    CHECK(m.edge_count() == (step >= 64 ? 16u : 0u));
  }
}

TEST_CASE("edr examples") {
  EdgeMap p{2, 2, {}, {1, 1, 0, 0}};
  EdgeMap q{2, 2, {}, {1, 0, 1, 0}};
  CHECK(edr(p, p) == 0.0);
  CHECK(edr(p, q) == doctest::Approx(0.5));
  EdgeMap none{2, 2, {}, {0, 0, 0, 0}};
  CHECK(edr(none, none) == 0.0);
  CHECK(edr(p, none) == doctest::Approx(1.0));
  EdgeMap inverse{2, 2, {}, {0, 0, 1, 1}};
  CHECK(edr(p, inverse) == doctest::Approx(1.0));
  EdgeMap wrong{3, 1, {}, {0, 0, 0}};
  CHECK_THROWS_AS(edr(p, wrong), Error);
}

TEST_CASE("bitrate change") {
  CHECK(bitrate_change(1000, 1000) == 0.0);
  CHECK(bitrate_change(1000, 1010) == doctest::Approx(0.01));
  CHECK(bitrate_change(1000, 990) == doctest::Approx(-0.01));
  CHECK_THROWS_AS(bitrate_change(0, 5), Error);
}

TEST_CASE("ledger totals and csv round trip") {
  EncryptionLedger l;
  l.record(ElementClass::kLumaIpm, FrameType::kIntra, 3);
  l.record(ElementClass::kLumaIpm, FrameType::kInter, 6);
  l.record(ElementClass::kResidualSign, FrameType::kInter, 17);
  l.add(ElementClass::kMvdSign, FrameType::kInter, LedgerEntry{4, 4});
  CHECK(l.total(ElementClass::kLumaIpm) == LedgerEntry{2, 9});
  CHECK(l.total(FrameType::kInter) == LedgerEntry{6, 27});
  CHECK(l.total() == LedgerEntry{7, 30});

  std::stringstream ss;
  l.write_csv(ss);
  const std::string text = ss.str();
  CHECK(text.rfind("class,frame_type,elements,bits\n", 0) == 0);
  CHECK(text.find("ipm,P,1,6\n") != std::string::npos);
  CHECK(text.find("rsign,P,1,17\n") != std::string::npos);
  CHECK(EncryptionLedger::read_csv(ss) == l);

  auto doubled = l;
  doubled += l;
  CHECK(doubled.total() == LedgerEntry{14, 60});

  std::istringstream bad_header("kind,frame,elements,bits\n");
  CHECK_THROWS_AS(EncryptionLedger::read_csv(bad_header), FormatError);
  std::istringstream bad_class("class,frame_type,elements,bits\nchroma,I,1,1\n");
  CHECK_THROWS_AS(EncryptionLedger::read_csv(bad_class), FormatError);
  std::istringstream bad_number("class,frame_type,elements,bits\nipm,I,x,1\n");
  CHECK_THROWS_AS(EncryptionLedger::read_csv(bad_number), FormatError);
}

TEST_CASE("report and metrics csv layout") {
  EncryptionLedger l;
  l.record(ElementClass::kMvdValue, FrameType::kInter, 1);
  l.record(ElementClass::kResidualSign, FrameType::kIntra, 5);
  std::ostringstream report;
  write_report_csv(report, 0.0125, encryption_space(l));
  CHECK(report.str() ==
        "bitrate_delta,0.012500\n"
        "enc_space,ipm,0,0\n"
        "enc_space,mvdv,1,1\n"
        "enc_space,mvds,0,0\n"
        "enc_space,rsign,1,5\n"
        "enc_space,total,2,6\n");

  std::vector<FrameMetrics> rows{{0, std::numeric_limits<double>::infinity(), 1.0, 0.0},
                                 {1, 31.25, 0.5, 0.125}};
  std::ostringstream metrics;
  write_metrics_csv(metrics, rows);
  CHECK(metrics.str() ==
        "frame,psnr_db,ssim,edr\n"
        "0,99.9900,1.000000,0.000000\n"
        "1,31.2500,0.500000,0.125000\n");
}

TEST_CASE("sequence comparison") {
  std::mt19937 rng(6);
  std::vector<FrameBuffer> a{smooth_frame(rng, 32, 32), smooth_frame(rng, 32, 32)};
  auto b = a;
  b[1].y.at(5, 5) ^= 1;
  const auto rows = compare_sequences(a, b);
  REQUIRE(rows.size() == 2);
  CHECK(std::isinf(rows[0].psnr_db));
  CHECK(rows[1].frame == 1);
  CHECK(rows[1].psnr_db > 60.0);
  CHECK_THROWS_AS(compare_sequences(a, std::span<const FrameBuffer>(b).first(1)), Error);
}
