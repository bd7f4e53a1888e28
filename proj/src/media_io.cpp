#include "sevc/media_io.hpp"

#include <algorithm>
#include <fstream>

namespace sevc {

std::uint8_t Plane::clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return samples_[index(x, y)];
}

FrameBuffer::FrameBuffer(int coded_width, int coded_height, int display_w, int display_h,
                         int index)
    : width(coded_width), height(coded_height), display_width(display_w),
      display_height(display_h), frame_index(index), y(coded_width, coded_height),
      cb(coded_width / 2, coded_height / 2), cr(coded_width / 2, coded_height / 2) {}

std::size_t frame_bytes(int width, int height) {
  const auto luma = static_cast<std::size_t>(width) * height;
  return luma + luma / 2;
}

int pad_to_multiple(int value, int multiple) {
  return (value + multiple - 1) / multiple * multiple;
}

namespace {

void pad_plane(const Plane& src, int display_w, int display_h, Plane& dst) {
  for (int y = 0; y < dst.height(); ++y) {
    for (int x = 0; x < dst.width(); ++x) {
      dst.at(x, y) = src.clamped(std::min(x, display_w - 1), std::min(y, display_h - 1));
    }
  }
}

void check_dimensions(int width, int height) {
  if (width <= 0 || height <= 0) throw Error("frame dimensions must be positive");
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error("frame dimensions must be even for 4:2:0 (got " + std::to_string(width) + "x" +
                std::to_string(height) + ")");
  }
}

}  // namespace

FrameBuffer pad_frame(const FrameBuffer& frame, int block) {
  const int w = pad_to_multiple(frame.display_width, block);
  const int h = pad_to_multiple(frame.display_height, block);
  FrameBuffer out(w, h, frame.display_width, frame.display_height, frame.frame_index);
  out.bit_depth = frame.bit_depth;
  pad_plane(frame.y, frame.display_width, frame.display_height, out.y);
  pad_plane(frame.cb, frame.display_width / 2, frame.display_height / 2, out.cb);
  pad_plane(frame.cr, frame.display_width / 2, frame.display_height / 2, out.cr);
  return out;
}

std::vector<FrameBuffer> read_yuv(std::span<const std::uint8_t> source, int width, int height,
                                  int max_frames, int pad_block) {
  check_dimensions(width, height);
  if (pad_block <= 0) throw Error("padding block must be positive");
  const std::size_t per_frame = frame_bytes(width, height);
  std::vector<FrameBuffer> frames;
  frames.reserve(static_cast<std::size_t>(std::max(max_frames, 0)));
  for (int f = 0; f < max_frames; ++f) {
    const std::size_t offset = per_frame * static_cast<std::size_t>(f);
    if (source.size() < offset + per_frame) {
      throw TruncatedError("yuv source truncated at frame " + std::to_string(f));
    }
    FrameBuffer raw(width, height, width, height, f);
    const std::uint8_t* p = source.data() + offset;
    for (int c = 0; c < 3; ++c) {
      auto dst = raw.plane(c).samples();
      std::copy_n(p, dst.size(), dst.begin());
      p += dst.size();
    }
    frames.push_back(pad_block > 1 ? pad_frame(raw, pad_block) : std::move(raw));
  }
  return frames;
}

std::vector<FrameBuffer> read_yuv(std::istream& source, int width, int height, int max_frames,
                                  int pad_block) {
  check_dimensions(width, height);
  const std::size_t wanted = frame_bytes(width, height) * static_cast<std::size_t>(std::max(max_frames, 0));
  std::vector<std::uint8_t> bytes(wanted);
  source.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(wanted));
  bytes.resize(static_cast<std::size_t>(source.gcount()));
  return read_yuv(bytes, width, height, max_frames, pad_block);
}

std::size_t write_yuv(std::span<const FrameBuffer> frames, std::ostream& sink) {
  const auto bytes = write_yuv(frames);
  sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw Error("failed writing yuv output");
  return bytes.size();
}

std::vector<std::uint8_t> write_yuv(std::span<const FrameBuffer> frames) {
  std::vector<std::uint8_t> out;
  if (frames.empty()) return out;
  const int w = frames.front().display_width;
  const int h = frames.front().display_height;
  out.reserve(frame_bytes(w, h) * frames.size());
  for (const auto& frame : frames) {
    if (frame.display_width != w || frame.display_height != h ||
        frame.bit_depth != frames.front().bit_depth) {
      throw Error("write_yuv: frames have mixed dimensions");
    }
    for (int c = 0; c < 3; ++c) {
      const Plane& plane = frame.plane(c);
      const int pw = c == 0 ? w : w / 2;
      const int ph = c == 0 ? h : h / 2;
      for (int y = 0; y < ph; ++y) out.insert(out.end(), plane.row(y), plane.row(y) + pw);
    }
  }
  return out;
}

std::vector<FrameBuffer> read_yuv_file(const std::string& path, int width, int height,
                                       int max_frames, int pad_block) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_yuv(in, width, height, max_frames, pad_block);
}

std::size_t write_yuv_file(std::span<const FrameBuffer> frames, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  return write_yuv(frames, out);
}

FrameBuffer crop_to_display(const FrameBuffer& frame) {
  FrameBuffer out(frame.display_width, frame.display_height, frame.display_width,
                  frame.display_height, frame.frame_index);
  out.bit_depth = frame.bit_depth;
  for (int c = 0; c < 3; ++c) {
    Plane& dst = out.plane(c);
    for (int y = 0; y < dst.height(); ++y) {
      std::copy_n(frame.plane(c).row(y), dst.width(), dst.row(y));
    }
  }
  return out;
}

}  // namespace sevc
