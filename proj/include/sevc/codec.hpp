#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sevc/container.hpp"
#include "sevc/crypto.hpp"
#include "sevc/cu_coding.hpp"
#include "sevc/ledger.hpp"
#include "sevc/media_io.hpp"
#include "sevc/partitioner.hpp"

namespace sevc {

inline constexpr int kMinCuSize = 8;
inline constexpr int kMaxSearchRange = 32;

struct CodecParams {
  int qp = 24;
  int gop_size = 8;  // intra period; the first frame is always intra
  int ctu_size = 32;
  int search_range = kDefaultSearchRange;
};

// Throws Error for unsupported parameter values.
void validate_params(const CodecParams& params);

// Quadtree limits implied by a CTU size: 8x8 minimum CU, depth down to it.
PartitionConfig partition_config(int ctu_size);

FrameType frame_type_for(int frame_index, int gop_size);

struct FrameSyntax {
  FrameType type = FrameType::kIntra;
  std::vector<CtuSyntax> ctus;  // raster order

  bool operator==(const FrameSyntax&) const = default;
};

// Encoder decisions for a sequence, independent of encryption.
struct EncodePlan {
  CodecParams params;
  int display_width = 0;
  int display_height = 0;
  std::vector<FrameSyntax> frames;            // plaintext syntax
  std::vector<FrameBuffer> reconstruction;    // coded size, display window set
};

struct EncodeJob {
  std::vector<FrameBuffer> frames;
  CodecParams params;
  EncryptionConfig encryption;
};

struct EncodeResult {
  std::vector<std::uint8_t> bitstream;
  EncryptionLedger ledger;
  std::vector<std::uint64_t> frame_bits;  // arithmetic-coded payload bits, before byte padding
  std::uint64_t payload_bits = 0;         // sum of frame_bits
  std::vector<FrameBuffer> reconstruction;
};

// Mode decisions and reconstruction. All frames must share display size.
EncodePlan plan_encode(std::span<const FrameBuffer> frames, const CodecParams& params);

// Applies encryption to the plan's syntax and entropy-codes it. When
// `cipher` is null and encryption is enabled, AES-128 keyed by
// encryption.key is used.
EncodeResult emit(const EncodePlan& plan, const EncryptionConfig& encryption,
                  const BlockCipher* cipher = nullptr);

EncodeResult encode(const EncodeJob& job);

struct DecodeOptions {
  std::optional<Key128> key;           // absent: elements are used as parsed
  const BlockCipher* cipher = nullptr;  // overrides key when set
};

struct DecodedStream {
  StreamHeader header;
  std::vector<FrameBuffer> frames;     // coded size, display window set
  std::vector<FrameSyntax> syntax;     // as parsed, before any decryption
};

// Throws FormatError / TruncatedError for malformed streams. Never fails
// because of a wrong or missing key.
DecodedStream decode(std::span<const std::uint8_t> bitstream, const DecodeOptions& options = {});

// Applies the selective encryption of `classes` to one CU in place, and
// records each touched element in `ledger` when given. Self-inverse.
void crypt_cu(CuSyntax& cu, std::uint8_t classes, const Keystream& ks, std::uint32_t frame_index,
              FrameType type, EncryptionLedger* ledger);

}  // namespace sevc
