#include "sevc/cu_coding.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace sevc {

int transform_size(int cu_size, int component) {
  const int side = component == 0 ? cu_size : cu_size / 2;
  return std::min(side, kMaxTransformSize);
}

int transform_tiles_per_row(int cu_size, int component) {
  const int side = component == 0 ? cu_size : cu_size / 2;
  return side / transform_size(cu_size, component);
}

template <class Sink>
void write_split_flag(Sink& sink, ContextSet& ctx, int flag) {
  sink.encode_bin(flag, ctx[ContextId::kSplitFlag]);
}

template <class Sink>
void write_ipm(Sink& sink, ContextSet& ctx, const IpmSyntax& ipm) {
  sink.encode_bin(ipm.is_mpm ? 1 : 0, ctx[ContextId::kIsMpm]);
  if (ipm.is_mpm) {
    for (auto b : binarize_truncated_unary(ipm.mpm_index, kMaxMpmIndex)) sink.encode_bypass(b);
  } else {
    sink.encode_bypass_bits(static_cast<std::uint32_t>(ipm.rem_mode), kRemModeBits);
  }
}

template <class Sink>
void write_mvd(Sink& sink, ContextSet& ctx, const MvdSyntax& mvd) {
  sink.encode_bin(mvd.greater0 ? 1 : 0, ctx[ContextId::kMvdGreater0]);
  if (!mvd.greater0) return;
  sink.encode_bin(mvd.greater1 ? 1 : 0, ctx[ContextId::kMvdGreater1]);
  if (mvd.greater1) {
    const auto gr = binarize_golomb_rice(mvd.abs_minus_2, kMvdRiceParam);
    if (gr.prefix.size() > static_cast<std::size_t>(kMaxUnaryPrefix)) {
      throw Error("motion vector difference too large to code");
    }
    for (auto b : gr.prefix) sink.encode_bypass(b);
    for (auto b : gr.suffix) sink.encode_bypass(b);
  }
  sink.encode_bypass(mvd.sign ? 1 : 0);
}

template <class Sink>
void write_coeffs(Sink& sink, ContextSet& ctx, const CoeffBlock& block) {
  const bool coded = std::any_of(block.levels.begin(), block.levels.end(), [](auto v) { return v != 0; });
  sink.encode_bin(coded ? 1 : 0, ctx[ContextId::kCodedBlockFlag]);
  if (!coded) return;
  bool prev_sig = false;
  for (auto level : block.levels) {
    const bool sig = level != 0;
    sink.encode_bin(sig ? 1 : 0, ctx[prev_sig ? ContextId::kSigFlagAfterSig : ContextId::kSigFlag]);
    prev_sig = sig;
    if (!sig) continue;
    const auto magnitude = static_cast<std::uint32_t>(std::abs(level));
    if (magnitude > kMaxCoeffMagnitude) throw Error("coefficient level too large to code");
    for (auto b : binarize_exp_golomb(magnitude - 1, 0)) sink.encode_bypass(b);
  }
  for (auto level : block.levels) {
    if (level != 0) sink.encode_bypass(level < 0 ? 1 : 0);
  }
}

template <class Sink>
void write_cu(Sink& sink, ContextSet& ctx, const CuSyntax& cu, FrameType type) {
  if (type == FrameType::kInter) {
    sink.encode_bin(cu.intra ? 1 : 0, ctx[ContextId::kPredMode]);
  } else if (!cu.intra) {
    throw Error("inter coding unit in an intra frame");
  }
  if (cu.intra) {
    write_ipm(sink, ctx, cu.ipm);
  } else {
    write_mvd(sink, ctx, cu.mvd[0]);
    write_mvd(sink, ctx, cu.mvd[1]);
  }
  for (int c = 0; c < kNumComponents; ++c) {
    const auto& tus = cu.tus[static_cast<std::size_t>(c)];
    const int per_row = transform_tiles_per_row(cu.rect.size, c);
    const int size = transform_size(cu.rect.size, c);
    if (tus.size() != static_cast<std::size_t>(per_row * per_row)) throw Error("transform tile count mismatch");
    for (const auto& tu : tus) {
      if (tu.size != size || tu.levels.size() != static_cast<std::size_t>(size * size)) {
        throw Error("transform block size mismatch");
      }
      write_coeffs(sink, ctx, tu);
    }
  }
}

template <class Sink>
void write_ctu(Sink& sink, ContextSet& ctx, const CtuSyntax& ctu, const PartitionConfig& config,
               FrameType type) {
  const int limit = config.depth_limit();
  std::size_t next = 0;
  for (const auto& node : ctu.tree.nodes) {
    if (node.depth < limit) write_split_flag(sink, ctx, node.split ? 1 : 0);
    if (node.split) continue;
    if (next >= ctu.cus.size() || !(ctu.cus[next].rect == node.rect)) {
      throw Error("coding units do not match the partition tree");
    }
    write_cu(sink, ctx, ctu.cus[next++], type);
  }
  if (next != ctu.cus.size()) throw Error("coding units do not match the partition tree");
}

#define SEVC_INSTANTIATE_WRITERS(Sink)                                                        \
  template void write_split_flag<Sink>(Sink&, ContextSet&, int);                              \
  template void write_ipm<Sink>(Sink&, ContextSet&, const IpmSyntax&);                        \
  template void write_mvd<Sink>(Sink&, ContextSet&, const MvdSyntax&);                        \
  template void write_coeffs<Sink>(Sink&, ContextSet&, const CoeffBlock&);                    \
  template void write_cu<Sink>(Sink&, ContextSet&, const CuSyntax&, FrameType);               \
  template void write_ctu<Sink>(Sink&, ContextSet&, const CtuSyntax&, const PartitionConfig&, \
                                FrameType);

SEVC_INSTANTIATE_WRITERS(BinaryEncoder)
SEVC_INSTANTIATE_WRITERS(BitEstimator)

#undef SEVC_INSTANTIATE_WRITERS

// ---------------------------------------------------------------------------

int read_split_flag(BinaryDecoder& dec, ContextSet& ctx) { return dec.decode_bin(ctx[ContextId::kSplitFlag]); }

IpmSyntax read_ipm(BinaryDecoder& dec, ContextSet& ctx) {
  IpmSyntax ipm;
  ipm.is_mpm = dec.decode_bin(ctx[ContextId::kIsMpm]) != 0;
  auto bypass = [&] { return dec.decode_bypass(); };
  if (ipm.is_mpm) {
    ipm.mpm_index = debinarize_truncated_unary(bypass, kMaxMpmIndex);
  } else {
    ipm.rem_mode = static_cast<int>(debinarize_fixed_length(bypass, kRemModeBits));
    if (ipm.rem_mode > kMaxRemMode) {
      throw FormatError("rem_mode out of range: " + std::to_string(ipm.rem_mode));
    }
  }
  return ipm;
}

MvdSyntax read_mvd(BinaryDecoder& dec, ContextSet& ctx) {
  MvdSyntax mvd;
  mvd.greater0 = dec.decode_bin(ctx[ContextId::kMvdGreater0]) != 0;
  if (!mvd.greater0) return mvd;
  mvd.greater1 = dec.decode_bin(ctx[ContextId::kMvdGreater1]) != 0;
  if (mvd.greater1) {
    mvd.abs_minus_2 = debinarize_golomb_rice([&] { return dec.decode_bypass(); }, kMvdRiceParam);
  }
  mvd.sign = dec.decode_bypass() != 0;
  return mvd;
}

CoeffBlock read_coeffs(BinaryDecoder& dec, ContextSet& ctx, int size) {
  CoeffBlock block;
  block.size = size;
  block.levels.assign(static_cast<std::size_t>(size * size), 0);
  if (dec.decode_bin(ctx[ContextId::kCodedBlockFlag]) == 0) return block;
  auto bypass = [&] { return dec.decode_bypass(); };
  bool prev_sig = false;
  for (auto& level : block.levels) {
    const bool sig = dec.decode_bin(ctx[prev_sig ? ContextId::kSigFlagAfterSig : ContextId::kSigFlag]) != 0;
    prev_sig = sig;
    if (!sig) continue;
    const std::uint64_t magnitude = std::uint64_t{debinarize_exp_golomb(bypass, 0)} + 1;
    if (magnitude > kMaxCoeffMagnitude) throw FormatError("coefficient level out of range");
    level = static_cast<std::int32_t>(magnitude);
  }
  for (auto& level : block.levels) {
    if (level != 0 && dec.decode_bypass() != 0) level = -level;
  }
  return block;
}

CuSyntax read_cu(BinaryDecoder& dec, ContextSet& ctx, const CuRect& rect, FrameType type) {
  CuSyntax cu;
  cu.rect = rect;
  cu.intra = type == FrameType::kIntra || dec.decode_bin(ctx[ContextId::kPredMode]) != 0;
  if (cu.intra) {
    cu.ipm = read_ipm(dec, ctx);
  } else {
    cu.mvd[0] = read_mvd(dec, ctx);
    cu.mvd[1] = read_mvd(dec, ctx);
  }
  for (int c = 0; c < kNumComponents; ++c) {
    const int per_row = transform_tiles_per_row(rect.size, c);
    const int size = transform_size(rect.size, c);
    auto& tus = cu.tus[static_cast<std::size_t>(c)];
    for (int i = 0; i < per_row * per_row; ++i) tus.push_back(read_coeffs(dec, ctx, size));
  }
  return cu;
}

namespace {

void read_node(BinaryDecoder& dec, ContextSet& ctx, const CuRect& rect, int depth, int limit,
               FrameType type, CtuSyntax& out) {
  const bool split = depth < limit && read_split_flag(dec, ctx) != 0;
  out.tree.nodes.push_back({rect, depth, split});
  if (!split) {
    out.cus.push_back(read_cu(dec, ctx, rect, type));
    return;
  }
  const int half = rect.size / 2;
  for (int i = 0; i < 4; ++i) {
    read_node(dec, ctx, {rect.x + (i & 1) * half, rect.y + (i >> 1) * half, half}, depth + 1, limit, type, out);
  }
}

}  // namespace

CtuSyntax read_ctu(BinaryDecoder& dec, ContextSet& ctx, int ctu_x, int ctu_y,
                   const PartitionConfig& config, FrameType type) {
  CtuSyntax ctu;
  read_node(dec, ctx, {ctu_x, ctu_y, config.ctu_size}, 0, config.depth_limit(), type, ctu);
  return ctu;
}

}  // namespace sevc
