#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sevc/ledger.hpp"

namespace sevc {

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 1 + 2 + 2 + 1 + 1 + 1 + 1 + 1 + 8 + 4;  // 26
inline constexpr std::size_t kFrameRecordHeaderBytes = 1 + 4;

struct StreamHeader {
  std::uint16_t width = 0;   // display size
  std::uint16_t height = 0;
  std::uint8_t bit_depth = 8;
  std::uint8_t qp = 0;
  std::uint8_t gop_size = 1;
  std::uint8_t ctu_size = 32;
  std::uint8_t enc_flags = 0;  // bit i <=> ElementClass(i)
  std::uint64_t nonce = 0;
  std::uint32_t frame_count = 0;

  bool operator==(const StreamHeader&) const = default;
};

struct FrameRecord {
  FrameType type = FrameType::kIntra;
  std::vector<std::uint8_t> payload;

  bool operator==(const FrameRecord&) const = default;
};

struct Container {
  StreamHeader header;
  std::vector<FrameRecord> frames;

  bool operator==(const Container&) const = default;
};

// Throws FormatError when a field is outside what the codec supports.
void validate_header(const StreamHeader& header);

std::vector<std::uint8_t> write_container(const Container& c);

// Throws FormatError on bad magic, version or field values and
// TruncatedError when the data ends early.
Container read_container(std::span<const std::uint8_t> bytes);

}  // namespace sevc
