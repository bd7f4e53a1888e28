#include <algorithm>
#include <string>

#include "codec_internal.hpp"

namespace sevc {

void validate_params(const CodecParams& p) {
  if (p.qp < 0 || p.qp > kMaxQp) throw Error("qp must be in [0, 51]");
  if (p.gop_size < 1 || p.gop_size > 255) throw Error("gop size must be in [1, 255]");
  if (p.ctu_size != 8 && p.ctu_size != 16 && p.ctu_size != 32 && p.ctu_size != 64 && p.ctu_size != 128) {
    throw Error("ctu size must be one of 8, 16, 32, 64, 128");
  }
  if (p.search_range < 0 || p.search_range > kMaxSearchRange) {
    throw Error("search range must be in [0, " + std::to_string(kMaxSearchRange) + "]");
  }
}

PartitionConfig partition_config(int ctu_size) {
  PartitionConfig cfg;
  cfg.ctu_size = ctu_size;
  cfg.min_cu_size = kMinCuSize;
  cfg.max_depth = 0;
  while ((ctu_size >> (cfg.max_depth + 1)) >= kMinCuSize) ++cfg.max_depth;
  return cfg;
}

FrameType frame_type_for(int frame_index, int gop_size) {
  return frame_index % gop_size == 0 ? FrameType::kIntra : FrameType::kInter;
}

void crypt_cu(CuSyntax& cu, std::uint8_t classes, const Keystream& ks, std::uint32_t frame_index,
              FrameType type, EncryptionLedger* ledger) {
  auto on = [&](ElementClass c) { return ((classes >> static_cast<int>(c)) & 1u) != 0; };
  auto note = [&](ElementClass c, std::uint64_t bits) {
    if (ledger != nullptr) ledger->record(c, type, bits);
  };
  UnitContext ctx;
  ctx.frame_index = frame_index;
  ctx.x = static_cast<std::uint32_t>(cu.rect.x);
  ctx.y = static_cast<std::uint32_t>(cu.rect.y);

  if (cu.intra) {
    if (on(ElementClass::kLumaIpm)) {
      cu.ipm = encrypt_ipm(cu.ipm, ks, ctx);
      note(ElementClass::kLumaIpm, static_cast<std::uint64_t>(ipm_encrypted_bits(cu.ipm)));
    }
  } else {
    for (std::uint32_t comp = 0; comp < 2; ++comp) {
      auto& mvd = cu.mvd[comp];
      ctx.ordinal = comp;
      if (on(ElementClass::kMvdValue) && mvd.greater1) {
        mvd = encrypt_mvd_value(mvd, ks, ctx);
        note(ElementClass::kMvdValue, kMvdRiceParam);
      }
      if (on(ElementClass::kMvdSign) && mvd.greater0) {
        mvd = encrypt_mvd_sign(mvd, ks, ctx);
        note(ElementClass::kMvdSign, 1);
      }
    }
  }

  if (on(ElementClass::kResidualSign)) {
    ctx.ordinal = 0;
    for (auto& tus : cu.tus) {
      for (auto& tu : tus) {
        auto split = extract_sign_pattern(tu);
        if (split.pattern.empty()) continue;
        ctx.ordinal = encrypt_sign_pattern(split.pattern, ks, ctx);
        note(ElementClass::kResidualSign, split.pattern.size());
        tu = apply_sign_pattern(split.magnitudes, split.pattern, tu.size);
      }
    }
  }
}

namespace detail {

namespace {

int morton(int ux, int uy) {
  int z = 0;
  for (int b = 0; b < 8; ++b) z |= (((ux >> b) & 1) << (2 * b)) | (((uy >> b) & 1) << (2 * b + 1));
  return z;
}

}  // namespace

CodingMap::CodingMap(int width, int height, int ctu_size)
    : width_(width), height_(height), ctu_size_(ctu_size),
      ctus_per_row_((width + ctu_size - 1) / ctu_size), units_per_row_(width / 4),
      modes_(static_cast<std::size_t>(width / 4) * (height / 4), -1) {}

bool CodingMap::available(int sx, int sy, int bx, int by) const {
  if (sx < 0 || sy < 0 || sx >= width_ || sy >= height_) return false;
  const int ctu_s = (sy / ctu_size_) * ctus_per_row_ + sx / ctu_size_;
  const int ctu_b = (by / ctu_size_) * ctus_per_row_ + bx / ctu_size_;
  if (ctu_s != ctu_b) return ctu_s < ctu_b;
  return morton((sx % ctu_size_) / 4, (sy % ctu_size_) / 4) < morton((bx % ctu_size_) / 4, (by % ctu_size_) / 4);
}

std::optional<int> CodingMap::neighbour_mode(int sx, int sy, int bx, int by) const {
  if (!available(sx, sy, bx, by)) return std::nullopt;
  const int m = modes_[static_cast<std::size_t>(sy / 4) * units_per_row_ + sx / 4];
  if (m < 0) return std::nullopt;
  return m;
}

void CodingMap::set_mode(const CuRect& r, int mode) {
  for (int uy = r.y / 4; uy < (r.y + r.size) / 4; ++uy) {
    for (int ux = r.x / 4; ux < (r.x + r.size) / 4; ++ux) {
      modes_[static_cast<std::size_t>(uy) * units_per_row_ + ux] = static_cast<std::int8_t>(mode);
    }
  }
}

MpmList CodingMap::mpm_list(const CuRect& r) const {
  const auto left = neighbour_mode(r.x - 1, r.y + r.size - 1, r.x, r.y);
  const auto above = neighbour_mode(r.x + r.size - 1, r.y - 1, r.x, r.y);
  return build_mpm_list(above, left);
}

IntraReferences intra_references(const FrameBuffer& picture, int component, const CuRect& cu,
                                 const CodingMap& map) {
  const int s = component_shift(component);
  const auto avail = [&](int px, int py) { return map.available(px << s, py << s, cu.x, cu.y); };
  return build_intra_references(picture.plane(component), cu.x >> s, cu.y >> s, cu.size >> s, avail);
}

std::vector<std::uint8_t> intra_prediction(const FrameBuffer& picture, int component, const CuRect& cu,
                                           int luma_mode, const CodingMap& map) {
  return predict_intra(intra_references(picture, component, cu, map), component == 0 ? luma_mode : kDcMode);
}

std::vector<std::uint8_t> inter_prediction(const FrameBuffer& reference, int component, const CuRect& cu,
                                           const MotionVector& mv) {
  const int s = component_shift(component);
  const int n = cu.size >> s;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n * n));
  predict_inter(reference.plane(component), cu.x >> s, cu.y >> s, n, n, component == 0 ? mv : chroma_mv(mv),
                out.data(), n);
  return out;
}

std::vector<std::uint8_t> reconstruct_block(int component, const CuRect& cu, const std::vector<std::uint8_t>& pred,
                                            const std::vector<CoeffBlock>& tus, int qp) {
  const int n = cu.size >> component_shift(component);
  const int t = transform_size(cu.size, component);
  const int per_row = n / t;
  if (tus.size() != static_cast<std::size_t>(per_row * per_row)) throw Error("transform tile count mismatch");
  std::vector<std::uint8_t> out = pred;
  for (int i = 0; i < per_row * per_row; ++i) {
    const auto& tu = tus[static_cast<std::size_t>(i)];
    if (tu.nonzero_count() == 0) continue;
    const auto residual = dequant_itransform(tu, qp);
    const int tx = (i % per_row) * t;
    const int ty = (i / per_row) * t;
    for (int y = 0; y < t; ++y) {
      for (int x = 0; x < t; ++x) {
        auto& v = out[static_cast<std::size_t>((ty + y) * n + tx + x)];
        v = static_cast<std::uint8_t>(std::clamp(v + residual[static_cast<std::size_t>(y * t + x)], 0, 255));
      }
    }
  }
  return out;
}

void store_block(FrameBuffer& picture, int component, const CuRect& cu, const std::vector<std::uint8_t>& block) {
  const int s = component_shift(component);
  const int n = cu.size >> s;
  Plane& plane = picture.plane(component);
  for (int y = 0; y < n; ++y) {
    std::copy_n(block.data() + static_cast<std::size_t>(y) * n, n, plane.row((cu.y >> s) + y) + (cu.x >> s));
  }
}

}  // namespace detail
}  // namespace sevc
