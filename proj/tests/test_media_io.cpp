#include <tuple>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sevc/media_io.hpp"

using namespace sevc;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

}  // namespace

TEST_CASE("one 64x64 frame splits into planes") {
  const auto bytes = random_bytes(6144, 1);
  const auto frames = read_yuv(bytes, 64, 64, 1);
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].y.samples().size() == 4096);
  CHECK(frames[0].cb.samples().size() == 1024);
  CHECK(frames[0].cr.samples().size() == 1024);
  CHECK(frames[0].y.at(0, 0) == bytes[0]);
  CHECK(frames[0].cb.at(0, 0) == bytes[4096]);
  CHECK(frames[0].cr.at(31, 31) == bytes[6143]);
}

TEST_CASE("short source names the truncated frame") {
  const auto bytes = random_bytes(6144, 2);
  try {
    read_yuv(bytes, 64, 64, 2);
    FAIL("expected truncation");
  } catch (const TruncatedError& e) {
    CHECK(std::string(e.what()).find("truncated at frame 1") != std::string::npos);
  }
}

TEST_CASE("odd or empty dimensions are rejected") {
  const auto bytes = random_bytes(6144, 3);
  CHECK_THROWS_AS(read_yuv(bytes, 63, 64, 1), Error);
  CHECK_THROWS_AS(read_yuv(bytes, 0, 64, 1), Error);
}

TEST_CASE("write then read is the identity on random buffers") {
  for (auto [w, h, n] : {std::tuple{64, 64, 1}, std::tuple{176, 144, 3}, std::tuple{18, 10, 4}}) {
    const auto bytes = random_bytes(frame_bytes(w, h) * static_cast<std::size_t>(n), static_cast<std::uint32_t>(w * h));
    const auto frames = read_yuv(bytes, w, h, n);
    CHECK(write_yuv(frames) == bytes);
    const auto padded = read_yuv(bytes, w, h, n, 32);
    CHECK(padded[0].width % 32 == 0);
    CHECK(write_yuv(padded) == bytes);
  }
}

TEST_CASE("stream overloads agree with the span ones") {
  const auto bytes = random_bytes(frame_bytes(16, 16) * 2, 9);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  const auto frames = read_yuv(in, 16, 16, 2);
  std::ostringstream out;
  CHECK(write_yuv(frames, out) == bytes.size());
  CHECK(out.str() == std::string(bytes.begin(), bytes.end()));
}

TEST_CASE("write sizes") {
  const auto frames = read_yuv(random_bytes(6144, 4), 64, 64, 1);
  CHECK(write_yuv(frames).size() == 6144);
  CHECK(write_yuv(std::span<const FrameBuffer>{}).empty());
}

TEST_CASE("mixed dimensions are rejected on write") {
  std::vector<FrameBuffer> frames;
  frames.emplace_back(16, 16, 16, 16);
  frames.emplace_back(32, 16, 32, 16);
  CHECK_THROWS_AS(write_yuv(frames), Error);
}

TEST_CASE("padding replicates edges and keeps the window") {
  const auto frames = read_yuv(random_bytes(frame_bytes(20, 12), 5), 20, 12, 1);
  const FrameBuffer padded = pad_frame(frames[0], 16);
  CHECK(padded.width == 32);
  CHECK(padded.height == 16);
  CHECK(padded.display_width == 20);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 20; ++x) CHECK(padded.y.at(x, y) == frames[0].y.at(x, y));
  }
  CHECK(padded.y.at(31, 15) == frames[0].y.at(19, 11));
  CHECK(padded.y.at(25, 3) == frames[0].y.at(19, 3));
  CHECK(padded.cb.at(15, 7) == frames[0].cb.at(9, 5));
  CHECK(crop_to_display(padded) == frames[0]);
}

TEST_CASE("clamped reads stay inside the plane") {
  Plane p(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) p.at(x, y) = static_cast<std::uint8_t>(10 * y + x);
  }
  CHECK(p.clamped(-5, -5) == 0);
  CHECK(p.clamped(9, 1) == 13);
  CHECK(p.clamped(2, 40) == 32);
}
