#include "sevc/container.hpp"

#include <algorithm>
#include <string>

#include "sevc/residual.hpp"

namespace sevc {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'E', 'V', 'C'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void le(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void raw(std::span<const std::uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint64_t le(int bytes, const char* what) {
    need(static_cast<std::size_t>(bytes), what);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  std::span<const std::uint8_t> raw(std::size_t n, const char* what) {
    need(n, what);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (data_.size() - pos_ < n) throw TruncatedError(std::string("container truncated in ") + what);
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

bool power_of_two(unsigned v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

void validate_header(const StreamHeader& h) {
  if (h.width == 0 || h.height == 0 || (h.width & 1) || (h.height & 1)) {
    throw FormatError("invalid picture size " + std::to_string(h.width) + "x" + std::to_string(h.height));
  }
  if (h.bit_depth != 8) throw FormatError("unsupported bit depth " + std::to_string(h.bit_depth));
  if (h.qp > kMaxQp) throw FormatError("qp out of range: " + std::to_string(h.qp));
  if (h.gop_size == 0) throw FormatError("gop size must be at least 1");
  if (!power_of_two(h.ctu_size) || h.ctu_size < 8 || h.ctu_size > 128) {
    throw FormatError("unsupported ctu size " + std::to_string(h.ctu_size));
  }
  if (h.enc_flags > 0x0F) throw FormatError("unknown encryption flags");
}

std::vector<std::uint8_t> write_container(const Container& c) {
  validate_header(c.header);
  if (c.frames.size() != c.header.frame_count) throw Error("frame count does not match header");
  Writer w;
  w.raw(kMagic);
  w.u8(kContainerVersion);
  w.le(c.header.width, 2);
  w.le(c.header.height, 2);
  w.u8(c.header.bit_depth);
  w.u8(c.header.qp);
  w.u8(c.header.gop_size);
  w.u8(c.header.ctu_size);
  w.u8(c.header.enc_flags);
  w.le(c.header.nonce, 8);
  w.le(c.header.frame_count, 4);
  for (const auto& f : c.frames) {
    if (f.payload.size() > 0xFFFFFFFFu) throw Error("frame payload too large");
    w.u8(static_cast<std::uint8_t>(f.type));
    w.le(f.payload.size(), 4);
    w.raw(f.payload);
  }
  return w.take();
}

Container read_container(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.raw(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw FormatError("bad magic: not a SEVC stream");
  const auto version = r.le(1, "header");
  if (version != kContainerVersion) throw FormatError("unsupported container version " + std::to_string(version));

  Container c;
  auto& h = c.header;
  h.width = static_cast<std::uint16_t>(r.le(2, "header"));
  h.height = static_cast<std::uint16_t>(r.le(2, "header"));
  h.bit_depth = static_cast<std::uint8_t>(r.le(1, "header"));
  h.qp = static_cast<std::uint8_t>(r.le(1, "header"));
  h.gop_size = static_cast<std::uint8_t>(r.le(1, "header"));
  h.ctu_size = static_cast<std::uint8_t>(r.le(1, "header"));
  h.enc_flags = static_cast<std::uint8_t>(r.le(1, "header"));
  h.nonce = r.le(8, "header");
  h.frame_count = static_cast<std::uint32_t>(r.le(4, "header"));
  validate_header(h);

  for (std::uint32_t i = 0; i < h.frame_count; ++i) {
    const std::string where = "frame " + std::to_string(i);
    FrameRecord f;
    const auto type = r.le(1, where.c_str());
    if (type > 1) throw FormatError(where + ": unknown frame type " + std::to_string(type));
    if (i == 0 && type != 0) throw FormatError("first frame must be intra");
    f.type = static_cast<FrameType>(type);
    const auto len = static_cast<std::size_t>(r.le(4, where.c_str()));
    const auto payload = r.raw(len, where.c_str());
    f.payload.assign(payload.begin(), payload.end());
    c.frames.push_back(std::move(f));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last frame");
  return c;
}

}  // namespace sevc
