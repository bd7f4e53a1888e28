#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "codec_internal.hpp"
#include "sevc/kernels.hpp"

namespace sevc {

namespace {

using detail::CodingMap;

struct Candidate {
  CuSyntax syntax;
  int mode = -1;  // luma intra mode; -1 for inter
  MotionVector mv;
  std::array<std::vector<std::uint8_t>, kNumComponents> recon;
  double distortion = 0.0;
  double bits = 0.0;
};

void copy_region(const FrameBuffer& from, FrameBuffer& to, int x, int y, int size) {
  for (int c = 0; c < kNumComponents; ++c) {
    const int s = detail::component_shift(c);
    const Plane& src = from.plane(c);
    Plane& dst = to.plane(c);
    const int n = size >> s;
    for (int j = 0; j < n; ++j) {
      std::copy_n(src.row((y >> s) + j) + (x >> s), n, dst.row((y >> s) + j) + (x >> s));
    }
  }
}

class FrameEncoder {
 public:
  FrameEncoder(const CodecParams& params, const FrameBuffer& original, const FrameBuffer* reference,
               FrameBuffer& recon)
      : params_(params),
        config_(partition_config(params.ctu_size)),
        lambda_(lambda_for_qp(params.qp)),
        type_(reference != nullptr ? FrameType::kInter : FrameType::kIntra),
        orig_(original),
        ref_(reference),
        recon_(recon),
        analysis_(recon),
        map_(original.width, original.height, params.ctu_size) {}

  FrameSyntax run() {
    FrameSyntax out;
    out.type = type_;
    for (int cy = 0; cy < orig_.height; cy += params_.ctu_size) {
      for (int cx = 0; cx < orig_.width; cx += params_.ctu_size) out.ctus.push_back(code_ctu(cx, cy));
    }
    return out;
  }

 private:
  CtuSyntax code_ctu(int cx, int cy) {
    mv_cache_.clear();
    copy_region(orig_, analysis_, cx, cy, params_.ctu_size);

    // Partition with the CTU's own source samples standing in for the
    // not-yet-reconstructed interior, contexts frozen at the CTU start.
    const ContextSet snapshot = contexts_;
    const double split_bits[2] = {bin_cost(snapshot[ContextId::kSplitFlag], 0),
                                  bin_cost(snapshot[ContextId::kSplitFlag], 1)};
    const MotionVector predictor = last_mv_;
    const auto cost = [&](const CuRect& r) {
      const Candidate c = best_candidate(analysis_, r, snapshot, predictor);
      return UnitCost{c.bits, c.distortion};
    };
    CtuSyntax ctu;
    ctu.tree = partition_ctu(cx, cy, config_, lambda_, cost, split_bits);

    const int limit = config_.depth_limit();
    BitEstimator tracker;  // keeps contexts_ in step with the real coder
    for (const auto& node : ctu.tree.nodes) {
      if (node.depth < limit) write_split_flag(tracker, contexts_, node.split ? 1 : 0);
      if (node.split) continue;
      Candidate c = best_candidate(recon_, node.rect, contexts_, last_mv_);
      for (int comp = 0; comp < kNumComponents; ++comp) {
        detail::store_block(recon_, comp, node.rect, c.recon[static_cast<std::size_t>(comp)]);
      }
      map_.set_mode(node.rect, c.mode);
      if (!c.syntax.intra) last_mv_ = c.mv;
      write_cu(tracker, contexts_, c.syntax, type_);
      ctu.cus.push_back(std::move(c.syntax));
    }
    copy_region(recon_, analysis_, cx, cy, params_.ctu_size);
    return ctu;
  }

  Candidate best_candidate(const FrameBuffer& neighbours, const CuRect& r, const ContextSet& ctx,
                           const MotionVector& predictor) {
    Candidate intra = intra_candidate(neighbours, r, ctx);
    if (type_ == FrameType::kIntra) return intra;
    Candidate best = std::move(intra);
    auto consider = [&](Candidate&& c) {
      if (c.distortion + lambda_ * c.bits < best.distortion + lambda_ * best.bits) best = std::move(c);
    };
    const MotionVector searched = search(r);
    consider(inter_candidate(r, ctx, predictor, searched));
    if (!(searched == predictor)) consider(inter_candidate(r, ctx, predictor, predictor));
    return best;
  }

  MotionVector search(const CuRect& r) {
    const auto key = std::make_tuple(r.x, r.y, r.size);
    auto it = mv_cache_.find(key);
    if (it == mv_cache_.end()) {
      it = mv_cache_.emplace(key, motion_search(orig_.y, r.x, r.y, r.size, r.size, ref_->y, params_.search_range))
               .first;
    }
    return it->second;
  }

  Candidate intra_candidate(const FrameBuffer& neighbours, const CuRect& r, const ContextSet& ctx) {
    Candidate c;
    const MpmList mpm = map_.mpm_list(r);
    const auto refs = detail::intra_references(neighbours, 0, r, map_);
    const IntraChoice choice = select_intra_mode(orig_.y.row(r.y) + r.x, orig_.y.stride(), refs, mpm);
    c.mode = choice.mode;
    c.syntax.rect = r;
    c.syntax.intra = true;
    c.syntax.ipm = choice.syntax;
    std::array<std::vector<std::uint8_t>, kNumComponents> pred;
    pred[0] = predict_intra(refs, choice.mode);
    for (int comp = 1; comp < kNumComponents; ++comp) {
      pred[static_cast<std::size_t>(comp)] = detail::intra_prediction(neighbours, comp, r, choice.mode, map_);
    }
    finish(c, pred, ctx, true);
    return c;
  }

  Candidate inter_candidate(const CuRect& r, const ContextSet& ctx, const MotionVector& predictor,
                            const MotionVector& mv) {
    Candidate c;
    c.mv = mv;
    const MotionVector mvd = compute_mvd(c.mv, predictor);
    c.syntax.rect = r;
    c.syntax.intra = false;
    c.syntax.mvd = {mvd_to_syntax(mvd.x), mvd_to_syntax(mvd.y)};
    std::array<std::vector<std::uint8_t>, kNumComponents> pred;
    for (int comp = 0; comp < kNumComponents; ++comp) {
      pred[static_cast<std::size_t>(comp)] = detail::inter_prediction(*ref_, comp, r, c.mv);
    }
    finish(c, pred, ctx, false);
    return c;
  }

  // Residual coding, reconstruction, distortion and rate of a candidate.
  void finish(Candidate& c, const std::array<std::vector<std::uint8_t>, kNumComponents>& pred,
              const ContextSet& ctx, bool intra) {
    const CuRect& r = c.syntax.rect;
    for (int comp = 0; comp < kNumComponents; ++comp) {
      const auto ci = static_cast<std::size_t>(comp);
      const int s = detail::component_shift(comp);
      const int n = r.size >> s;
      const int t = transform_size(r.size, comp);
      const int per_row = n / t;
      const Plane& src = orig_.plane(comp);
      const int x0 = r.x >> s;
      const int y0 = r.y >> s;
      auto& tus = c.syntax.tus[ci];
      tus.clear();
      std::vector<int> residual(static_cast<std::size_t>(t * t));
      for (int i = 0; i < per_row * per_row; ++i) {
        const int tx = (i % per_row) * t;
        const int ty = (i / per_row) * t;
        for (int y = 0; y < t; ++y) {
          for (int x = 0; x < t; ++x) {
            residual[static_cast<std::size_t>(y * t + x)] =
                src.at(x0 + tx + x, y0 + ty + y) - pred[ci][static_cast<std::size_t>((ty + y) * n + tx + x)];
          }
        }
        tus.push_back(transform_quant(residual, t, params_.qp, intra));
      }
      c.recon[ci] = detail::reconstruct_block(comp, r, pred[ci], tus, params_.qp);
      c.distortion += static_cast<double>(
          kernels::sse(src.row(y0) + x0, src.stride(), c.recon[ci].data(), n, n, n));
    }
    ContextSet scratch = ctx;
    BitEstimator estimator;
    write_cu(estimator, scratch, c.syntax, type_);
    c.bits = estimator.bits();
  }

  const CodecParams& params_;
  PartitionConfig config_;
  double lambda_;
  FrameType type_;
  const FrameBuffer& orig_;
  const FrameBuffer* ref_;
  FrameBuffer& recon_;
  FrameBuffer analysis_;
  CodingMap map_;
  ContextSet contexts_;
  MotionVector last_mv_{};
  std::map<std::tuple<int, int, int>, MotionVector> mv_cache_;
};

}  // namespace

EncodePlan plan_encode(std::span<const FrameBuffer> frames, const CodecParams& params) {
  validate_params(params);
  if (frames.empty()) throw Error("no frames to encode");
  EncodePlan plan;
  plan.params = params;
  plan.display_width = frames.front().display_width;
  plan.display_height = frames.front().display_height;
  if (plan.display_width <= 0 || plan.display_height <= 0 || plan.display_width % 2 != 0 ||
      plan.display_height % 2 != 0 || plan.display_width > 0xFFFF || plan.display_height > 0xFFFF) {
    throw Error("unsupported picture size");
  }
  check_counter_capacity(pad_to_multiple(plan.display_width, params.ctu_size),
                         pad_to_multiple(plan.display_height, params.ctu_size), static_cast<int>(frames.size()));

  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (f.display_width != plan.display_width || f.display_height != plan.display_height) {
      throw Error("frame " + std::to_string(i) + " differs in size from frame 0");
    }
    const FrameBuffer original = pad_frame(f, params.ctu_size);
    FrameBuffer recon(original.width, original.height, original.display_width, original.display_height,
                      static_cast<int>(i));
    const bool intra = frame_type_for(static_cast<int>(i), params.gop_size) == FrameType::kIntra;
    const FrameBuffer* reference = intra ? nullptr : &plan.reconstruction.back();
    FrameEncoder encoder(params, original, reference, recon);
    plan.frames.push_back(encoder.run());
    plan.reconstruction.push_back(std::move(recon));
  }
  return plan;
}

EncodeResult emit(const EncodePlan& plan, const EncryptionConfig& encryption, const BlockCipher* cipher) {
  Container container;
  auto& h = container.header;
  h.width = static_cast<std::uint16_t>(plan.display_width);
  h.height = static_cast<std::uint16_t>(plan.display_height);
  h.qp = static_cast<std::uint8_t>(plan.params.qp);
  h.gop_size = static_cast<std::uint8_t>(plan.params.gop_size);
  h.ctu_size = static_cast<std::uint8_t>(plan.params.ctu_size);
  h.enc_flags = encryption.classes;
  h.nonce = encryption.nonce;
  h.frame_count = static_cast<std::uint32_t>(plan.frames.size());

  std::unique_ptr<Aes128Cipher> aes;
  if (encryption.any() && cipher == nullptr) {
    aes = std::make_unique<Aes128Cipher>(encryption.key);
    cipher = aes.get();
  }
  const PartitionConfig config = partition_config(plan.params.ctu_size);

  EncodeResult result;
  for (std::size_t i = 0; i < plan.frames.size(); ++i) {
    const FrameSyntax& frame = plan.frames[i];
    BinaryEncoder coder;
    ContextSet contexts;
    for (const CtuSyntax& plain : frame.ctus) {
      if (!encryption.any()) {
        write_ctu(coder, contexts, plain, config, frame.type);
        continue;
      }
      CtuSyntax ctu = plain;
      const Keystream ks(*cipher, encryption.nonce);
      for (auto& cu : ctu.cus) {
        crypt_cu(cu, encryption.classes, ks, static_cast<std::uint32_t>(i), frame.type, &result.ledger);
      }
      write_ctu(coder, contexts, ctu, config, frame.type);
    }
    result.frame_bits.push_back(coder.bit_count());
    result.payload_bits += coder.bit_count();
    container.frames.push_back({frame.type, coder.finish()});
  }
  result.bitstream = write_container(container);
  result.reconstruction = plan.reconstruction;
  return result;
}

EncodeResult encode(const EncodeJob& job) {
  return emit(plan_encode(job.frames, job.params), job.encryption);
}

}  // namespace sevc
