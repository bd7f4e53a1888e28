#include <memory>
#include <string>

#include "codec_internal.hpp"

namespace sevc {

DecodedStream decode(std::span<const std::uint8_t> bitstream, const DecodeOptions& options) {
  Container container = read_container(bitstream);
  DecodedStream out;
  out.header = container.header;
  const auto& h = out.header;
  const int ctu = h.ctu_size;
  const int width = pad_to_multiple(h.width, ctu);
  const int height = pad_to_multiple(h.height, ctu);
  const int qp = h.qp;
  const PartitionConfig config = partition_config(ctu);

  const BlockCipher* cipher = options.cipher;
  std::unique_ptr<Aes128Cipher> aes;
  if (cipher == nullptr && options.key && h.enc_flags != 0) {
    aes = std::make_unique<Aes128Cipher>(*options.key);
    cipher = aes.get();
  }
  const bool decrypt = cipher != nullptr && h.enc_flags != 0;
  if (decrypt) check_counter_capacity(width, height, static_cast<int>(h.frame_count));

  for (std::size_t i = 0; i < container.frames.size(); ++i) {
    const FrameRecord& record = container.frames[i];
    const std::string where = "frame " + std::to_string(i);
    if (record.type != frame_type_for(static_cast<int>(i), h.gop_size)) {
      throw FormatError(where + ": frame type does not match the intra period");
    }

    BinaryDecoder dec(record.payload);
    ContextSet contexts;
    FrameSyntax syntax;
    syntax.type = record.type;
    for (int cy = 0; cy < height; cy += ctu) {
      for (int cx = 0; cx < width; cx += ctu) syntax.ctus.push_back(read_ctu(dec, contexts, cx, cy, config, record.type));
    }
    if ((dec.bits_consumed() + 7) / 8 != record.payload.size()) {
      throw FormatError(where + ": payload has trailing data");
    }

    FrameBuffer recon(width, height, h.width, h.height, static_cast<int>(i));
    const FrameBuffer* reference = record.type == FrameType::kInter ? &out.frames.back() : nullptr;
    detail::CodingMap map(width, height, ctu);
    MotionVector last_mv{};
    std::unique_ptr<Keystream> ks;
    if (decrypt) ks = std::make_unique<Keystream>(*cipher, h.nonce);

    for (const CtuSyntax& parsed : syntax.ctus) {
      for (CuSyntax cu : parsed.cus) {
        if (decrypt) crypt_cu(cu, h.enc_flags, *ks, static_cast<std::uint32_t>(i), record.type, nullptr);
        const CuRect& r = cu.rect;
        std::array<std::vector<std::uint8_t>, kNumComponents> pred;
        if (cu.intra) {
          const int mode = syntax_to_mode(cu.ipm, map.mpm_list(r));
          for (int c = 0; c < kNumComponents; ++c) {
            pred[static_cast<std::size_t>(c)] = detail::intra_prediction(recon, c, r, mode, map);
          }
          map.set_mode(r, mode);
        } else {
          const MotionVector mvd{syntax_to_mvd(cu.mvd[0]), syntax_to_mvd(cu.mvd[1])};
          last_mv = last_mv + mvd;
          for (int c = 0; c < kNumComponents; ++c) {
            pred[static_cast<std::size_t>(c)] = detail::inter_prediction(*reference, c, r, last_mv);
          }
          map.set_mode(r, -1);
        }
        for (int c = 0; c < kNumComponents; ++c) {
          const auto ci = static_cast<std::size_t>(c);
          detail::store_block(recon, c, r, detail::reconstruct_block(c, r, pred[ci], cu.tus[ci], qp));
        }
      }
    }
    out.frames.push_back(std::move(recon));
    out.syntax.push_back(std::move(syntax));
  }
  return out;
}

}  // namespace sevc
