#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sevc {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed container or bitstream.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Source data ended before the requested content was read.
class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

// One plane of 8-bit samples, row-major with stride == width.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height),
        samples_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::ptrdiff_t stride() const { return width_; }

  std::uint8_t at(int x, int y) const { return samples_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return samples_[index(x, y)]; }

  // Edge-replicating read; coordinates outside the plane clamp to the border.
  std::uint8_t clamped(int x, int y) const;

  const std::uint8_t* row(int y) const { return samples_.data() + static_cast<std::size_t>(y) * width_; }
  std::uint8_t* row(int y) { return samples_.data() + static_cast<std::size_t>(y) * width_; }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  bool operator==(const Plane&) const = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

// One 4:2:0 picture. width/height are the padded (coded) dimensions; the
// display window is display_width x display_height anchored at (0, 0).
struct FrameBuffer {
  int width = 0;
  int height = 0;
  int display_width = 0;
  int display_height = 0;
  int bit_depth = 8;
  int frame_index = 0;
  Plane y;
  Plane cb;
  Plane cr;

  FrameBuffer() = default;
  FrameBuffer(int coded_width, int coded_height, int display_w, int display_h, int index = 0);

  const Plane& plane(int component) const { return component == 0 ? y : (component == 1 ? cb : cr); }
  Plane& plane(int component) { return component == 0 ? y : (component == 1 ? cb : cr); }

  bool operator==(const FrameBuffer&) const = default;
};

// Bytes occupied by one 8-bit 4:2:0 frame.
std::size_t frame_bytes(int width, int height);

// Rounds `value` up to a multiple of `multiple`.
int pad_to_multiple(int value, int multiple);

// Extends the frame to multiples of `block` by edge replication. Samples
// inside the display window are untouched.
FrameBuffer pad_frame(const FrameBuffer& frame, int block);

// Parses planar 8-bit 4:2:0 data. Frames are padded to `pad_block`
// multiples (pass 1 to disable). Throws TruncatedError naming the frame
// where data ran out, Error on odd or non-positive dimensions.
std::vector<FrameBuffer> read_yuv(std::span<const std::uint8_t> source, int width, int height,
                                  int max_frames, int pad_block = 1);
std::vector<FrameBuffer> read_yuv(std::istream& source, int width, int height, int max_frames,
                                  int pad_block = 1);

// Writes the display window of each frame as planar 4:2:0. Returns bytes
// written. All frames must share display dimensions.
std::size_t write_yuv(std::span<const FrameBuffer> frames, std::ostream& sink);
std::vector<std::uint8_t> write_yuv(std::span<const FrameBuffer> frames);

std::vector<FrameBuffer> read_yuv_file(const std::string& path, int width, int height,
                                       int max_frames, int pad_block = 1);
std::size_t write_yuv_file(std::span<const FrameBuffer> frames, const std::string& path);

// Returns a copy cropped to its display window (coded size == display size).
FrameBuffer crop_to_display(const FrameBuffer& frame);

}  // namespace sevc
