// End-to-end acceptance checks over the synthetic corpus. Prints one
// PASS/FAIL line per criterion. Exit status is 0 once every criterion has
// been evaluated; pass --strict to make any FAIL a nonzero exit.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "oracles.hpp"
#include "sevc/codec.hpp"
#include "sevc/entropy.hpp"
#include "sevc/metrics.hpp"

namespace {

using namespace sevc;
using sevc::testing::ClipSpec;

constexpr int kQps[] = {8, 24, 40};
constexpr int kGop = 8;
constexpr std::uint8_t kAll = 0x0F;
constexpr std::uint8_t kIpmOnly = 0x01;
constexpr std::uint8_t kMvdOnly = 0x06;

const Key128 kKey = parse_key_hex("2b7e151628aed2a6abf7158809cf4f3c");
const Key128 kWrongKey = parse_key_hex("3c4fcf098815f7aba6d2ae2816157e2b");

struct Criterion {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

struct Case {
  const ClipSpec* spec = nullptr;
  const std::vector<FrameBuffer>* clip = nullptr;
  int qp = 0;
  EncodePlan plan;
  EncodeResult plain;
  DecodedStream plain_decode;
  std::array<EncodeResult, 16> encrypted;  // indexed by class mask; [0] unused
};

std::string label(const Case& c) { return c.spec->name + "@qp" + std::to_string(c.qp); }

bool same_frames(const std::vector<FrameBuffer>& a, const std::vector<FrameBuffer>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

EncryptionConfig config(std::uint8_t classes, std::uint64_t nonce) {
  EncryptionConfig cfg;
  cfg.classes = classes;
  cfg.key = kKey;
  cfg.nonce = nonce;
  return cfg;
}

std::vector<double> frame_ssim(const std::vector<FrameBuffer>& ref, const std::vector<FrameBuffer>& test) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ref.size(); ++i) out.push_back(ssim(ref[i], test[i]));
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------

Criterion ranged_xor_involution() {
  Criterion c;
  std::uint64_t checked = 0;
  for (std::uint32_t m = 1; m <= 63; ++m) {
    const int w = range_width(m);
    for (std::uint32_t v = 0; v <= m; ++v) {
      for (std::uint32_t chunk = 0; chunk < (1u << w); ++chunk) {
        const std::uint32_t e = ranged_xor(v, m, chunk);
        c.require(e <= m && ranged_xor(e, m, chunk) == v,
                  "M=" + std::to_string(m) + " v=" + std::to_string(v) + " chunk=" + std::to_string(chunk));
        ++checked;
      }
    }
  }
  c.detail = std::to_string(checked) + " triples";
  return c;
}

Criterion round_trip(const std::vector<Case>& cases) {
  Criterion c;
  for (const auto& k : cases) {
    c.require(same_frames(k.plain_decode.frames, k.plan.reconstruction), label(k));
  }
  c.detail = std::to_string(cases.size()) + " clip/qp streams";
  return c;
}

Criterion correct_key(const std::vector<Case>& cases) {
  Criterion c;
  int streams = 0;
  for (const auto& k : cases) {
    for (int mask = 1; mask < 16; ++mask) {
      const auto dec = decode(k.encrypted[static_cast<std::size_t>(mask)].bitstream, DecodeOptions{kKey, nullptr});
      c.require(same_frames(dec.frames, k.plain_decode.frames), label(k) + " classes=" + std::to_string(mask));
      ++streams;
    }
  }
  c.detail = std::to_string(streams) + " encrypted streams";
  return c;
}

Criterion format_compliance(const std::vector<Case>& cases) {
  Criterion c;
  std::mt19937_64 rng(2024);
  int decodes = 0;
  for (const auto& k : cases) {
    if (k.qp != 24) continue;
    const auto& stream = k.encrypted[kAll].bitstream;
    for (int i = 0; i <= 100; ++i) {
      DecodeOptions options;
      if (i < 100) {
        Key128 key;
        for (auto& b : key) b = static_cast<std::uint8_t>(rng());
        options.key = key;
      }
      try {
        const auto dec = decode(stream, options);
        c.require(dec.frames.size() == k.clip->size(), label(k) + " frame count");
      } catch (const std::exception& e) {
        c.require(false, label(k) + (i < 100 ? " wrong key: " : " no key: ") + e.what());
      }
      ++decodes;
    }
  }
  c.detail = std::to_string(decodes) + " decodes (100 wrong keys + no key per clip, full encryption, qp 24)";
  return c;
}

Criterion length_invariance(const std::vector<Case>& cases) {
  Criterion c;
  double worst_ipm = 0.0;
  for (const auto& k : cases) {
    for (int mask = 1; mask < 16; ++mask) {
      const auto& e = k.encrypted[static_cast<std::size_t>(mask)];
      const double delta = bitrate_change(k.plain.payload_bits, e.payload_bits);
      if ((mask & 1) == 0) {
        c.require(e.payload_bits == k.plain.payload_bits && e.frame_bits == k.plain.frame_bits,
                  label(k) + " classes=" + std::to_string(mask) + " delta " + std::to_string(delta));
      } else {
        worst_ipm = std::max(worst_ipm, std::abs(delta));
        c.require(std::abs(delta) <= 0.10, label(k) + " classes=" + std::to_string(mask) + " delta " + std::to_string(delta));
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "bypass-only subsets exact; worst |delta| with ipm %.4f", worst_ipm);
  c.detail = buf;
  return c;
}

Criterion visual_security(const std::vector<Case>& cases, std::string& table) {
  Criterion c;
  double worst_ssim = -1.0, worst_edr = 2.0;
  for (const auto& k : cases) {
    if (!k.spec->textured) continue;
    const auto dec = decode(k.encrypted[kAll].bitstream, DecodeOptions{kWrongKey, nullptr});
    const double s = mean(frame_ssim(k.plain_decode.frames, dec.frames));
    std::vector<double> edrs;
    for (std::size_t i = 0; i < dec.frames.size(); ++i) edrs.push_back(edr(k.plain_decode.frames[i], dec.frames[i]));
    const double e = mean(edrs);
    worst_ssim = std::max(worst_ssim, s);
    worst_edr = std::min(worst_edr, e);
    char buf[160];
    std::snprintf(buf, sizeof buf, "    %-26s ssim %.4f  edr %.4f%s\n", label(k).c_str(), s, e,
                  s <= 0.60 && e >= 0.70 ? "" : "  <-");
    table += buf;
    c.require(s <= 0.60 && 1.0 - s >= 0.25, label(k) + " ssim " + std::to_string(s));
    c.require(e >= 0.70, label(k) + " edr " + std::to_string(e));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max mean ssim %.4f, min mean edr %.4f", worst_ssim, worst_edr);
  c.detail = buf;
  return c;
}

Criterion element_importance(const std::vector<Case>& cases, std::string& table) {
  Criterion c;
  int checked = 0;
  for (const auto& k : cases) {
    if (!k.spec->moving) continue;
    std::vector<double> intra_mvd, inter_mvd, intra_ipm;
    const auto mvd = decode(k.encrypted[kMvdOnly].bitstream, DecodeOptions{kWrongKey, nullptr});
    const auto ipm = decode(k.encrypted[kIpmOnly].bitstream, DecodeOptions{kWrongKey, nullptr});
    const auto s_mvd = frame_ssim(k.plain_decode.frames, mvd.frames);
    const auto s_ipm = frame_ssim(k.plain_decode.frames, ipm.frames);
    for (std::size_t i = 0; i < s_mvd.size(); ++i) {
      if (frame_type_for(static_cast<int>(i), kGop) == FrameType::kIntra) {
        intra_mvd.push_back(s_mvd[i]);
        intra_ipm.push_back(s_ipm[i]);
      } else {
        inter_mvd.push_back(s_mvd[i]);
      }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "    %-26s mvd-only I %.4f P %.4f   ipm-only I %.4f%s\n", label(k).c_str(),
                  mean(intra_mvd), mean(inter_mvd), mean(intra_ipm),
                  mean(intra_mvd) >= mean(inter_mvd) && mean(intra_ipm) <= 0.8 ? "" : "  <-");
    table += buf;
    c.require(mean(intra_mvd) >= mean(inter_mvd), label(k) + " mvd-only I " + std::to_string(mean(intra_mvd)) +
                                                       " < P " + std::to_string(mean(inter_mvd)));
    // The plain decode compared with itself scores 1.0.
    c.require(mean(intra_ipm) <= 0.8, label(k) + " ipm-only I-frame ssim " + std::to_string(mean(intra_ipm)));
    ++checked;
  }
  c.detail = std::to_string(checked) + " moving clip/qp cases";
  return c;
}

Criterion encryption_space_trend(const std::vector<Case>& cases) {
  Criterion c;
  for (const auto& k : cases) {
    const auto& e = k.encrypted[kAll];
    const auto dec = decode(e.bitstream);
    c.require(testing::recount_ledger(dec.syntax, kAll) == e.ledger, label(k) + " ledger vs recount");
  }
  std::string counts;
  for (std::size_t i = 0; i + 2 < cases.size(); i += 3) {
    if (!cases[i].spec->textured) continue;
    std::uint64_t n[3];
    for (int q = 0; q < 3; ++q) n[q] = cases[i + static_cast<std::size_t>(q)].encrypted[kAll].ledger.total().elements;
    c.require(n[0] > n[1] && n[1] > n[2], cases[i].spec->name + " " + std::to_string(n[0]) + "/" +
                                              std::to_string(n[1]) + "/" + std::to_string(n[2]));
  }
  c.detail = "recount matches on " + std::to_string(cases.size()) + " streams; counts fall with qp on textured clips";
  return c;
}

Criterion metric_oracles() {
  Criterion c;
  std::mt19937 rng(77);
  // SSIM against the direct windowed implementation.
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int w = 16 + static_cast<int>(rng() % 49);
    const int h = 16 + static_cast<int>(rng() % 33);
    FrameBuffer a(w, h, w, h), b(w, h, w, h);
    const int noise = 1 + static_cast<int>(rng() % 120);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int base = i % 2 ? static_cast<int>(rng() % 256) : (x * 7 + y * 3 + i) % 256;
        a.y.at(x, y) = static_cast<std::uint8_t>(base);
        b.y.at(x, y) = static_cast<std::uint8_t>(std::clamp(base + static_cast<int>(rng() % (2 * noise + 1)) - noise, 0, 255));
      }
    }
    const double diff = std::abs(ssim(a, b) - testing::naive_ssim(a.y, b.y, w, h));
    worst = std::max(worst, diff);
    c.require(diff <= 1e-6, "ssim pair " + std::to_string(i));
  }
  // EDR on constructed maps: |P - Q| / |P + Q| counted by hand.
  struct EdrCase {
    std::vector<std::uint8_t> p, q;
    double expect;
  };
  const EdrCase edr_cases[] = {
      {{1, 0, 0, 0}, {1, 0, 0, 0}, 0.0},
      {{1, 1, 0, 0}, {0, 0, 1, 1}, 1.0},
      {{1, 1, 0, 0}, {1, 0, 1, 0}, 2.0 / 4.0},
      {{1, 1, 1, 0}, {1, 0, 0, 0}, 2.0 / 4.0},
      {{0, 0, 0, 0}, {0, 0, 0, 0}, 0.0},
      {{1, 1, 1, 1}, {0, 0, 0, 0}, 1.0},
      {{1, 1, 1, 1}, {1, 1, 1, 0}, 1.0 / 7.0},
      {{0, 1, 0, 1}, {1, 1, 1, 1}, 2.0 / 6.0},
      {{1, 0, 0, 0}, {0, 1, 1, 1}, 1.0},
      {{1, 1, 0, 1}, {1, 0, 0, 1}, 1.0 / 5.0},
  };
  for (const auto& e : edr_cases) {
    const EdgeMap p{2, 2, {}, e.p};
    const EdgeMap q{2, 2, {}, e.q};
    c.require(edr(p, q) == e.expect, "edr case");
  }
  // PSNR closed forms.
  FrameBuffer ref(16, 16, 16, 16), test(16, 16, 16, 16);
  for (auto& v : ref.y.samples()) v = 100;
  c.require(std::isinf(psnr(ref, ref)), "psnr identical");
  for (int d : {1, 2, 10, 100}) {
    for (auto& v : test.y.samples()) v = static_cast<std::uint8_t>(100 + d);
    const double expect = 20.0 * std::log10(255.0 / d);
    c.require(std::abs(psnr(ref, test) - expect) <= 0.01, "psnr d=" + std::to_string(d));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "ssim max |diff| %.2e over 50 pairs; 10 edr cases; 5 psnr cases", worst);
  c.detail = buf;
  return c;
}

Criterion entropy_lossless() {
  Criterion c;
  constexpr int kBins = 100000;
  constexpr int kContexts = static_cast<int>(ContextId::kCount);
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    std::mt19937 rng(seed);
    std::vector<std::uint8_t> bins(kBins), ctx(kBins);
    const std::uint32_t skew = rng() % 100;
    for (int i = 0; i < kBins; ++i) {
      ctx[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng() % (kContexts + 1));  // kContexts = bypass
      bins[static_cast<std::size_t>(i)] = rng() % 100 < skew ? 1 : 0;
    }
    ContextSet enc_ctx;
    BinaryEncoder enc;
    for (int i = 0; i < kBins; ++i) {
      const auto k = ctx[static_cast<std::size_t>(i)];
      if (k == kContexts) {
        enc.encode_bypass(bins[static_cast<std::size_t>(i)]);
      } else {
        enc.encode_bin(bins[static_cast<std::size_t>(i)], enc_ctx[static_cast<ContextId>(k)]);
      }
    }
    const auto bytes = enc.finish();
    ContextSet dec_ctx;
    BinaryDecoder dec(bytes);
    bool ok = true;
    for (int i = 0; i < kBins && ok; ++i) {
      const auto k = ctx[static_cast<std::size_t>(i)];
      const int bin = k == kContexts ? dec.decode_bypass() : dec.decode_bin(dec_ctx[static_cast<ContextId>(k)]);
      ok = bin == bins[static_cast<std::size_t>(i)];
    }
    c.require(ok && dec_ctx == enc_ctx, "seed " + std::to_string(seed));
  }
  c.detail = "100 seeds x 100000 bins";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const auto specs = testing::standard_corpus();
  std::vector<std::vector<FrameBuffer>> clips;
  for (const auto& s : specs) clips.push_back(testing::make_clip(s));

  std::vector<Case> cases;
  std::uint64_t nonce = 1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (int qp : kQps) {
      Case k;
      k.spec = &specs[i];
      k.clip = &clips[i];
      k.qp = qp;
      CodecParams params;
      params.qp = qp;
      params.gop_size = kGop;
      k.plan = plan_encode(clips[i], params);
      k.plain = emit(k.plan, EncryptionConfig{});
      k.plain_decode = decode(k.plain.bitstream);
      for (int mask = 1; mask < 16; ++mask) {
        k.encrypted[static_cast<std::size_t>(mask)] = emit(k.plan, config(static_cast<std::uint8_t>(mask), nonce++));
      }
      cases.push_back(std::move(k));
    }
  }
  std::printf("corpus: %zu clips x %zu qps encoded in %.1f s\n", specs.size(), std::size(kQps), elapsed());

  std::string security_table, importance_table;
  const std::vector<std::pair<const char*, std::function<Criterion()>>> criteria = {
      {"ranged-xor involution", ranged_xor_involution},
      {"codec round trip", [&] { return round_trip(cases); }},
      {"correct-key equivalence", [&] { return correct_key(cases); }},
      {"format compliance", [&] { return format_compliance(cases); }},
      {"length invariance", [&] { return length_invariance(cases); }},
      {"visual security", [&] { return visual_security(cases, security_table); }},
      {"element importance", [&] { return element_importance(cases, importance_table); }},
      {"encryption space", [&] { return encryption_space_trend(cases); }},
      {"metric oracles", metric_oracles},
      {"entropy losslessness", entropy_lossless},
  };

  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const double t0 = elapsed();
    Criterion c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.pass = false;
      c.first_failure = std::string("exception: ") + e.what();
    }
    passed += c.pass;
    std::printf("criterion %2zu %-24s %s  %s%s%s (%.1f s)\n", i + 1, criteria[i].first, c.pass ? "PASS" : "FAIL",
                c.detail.c_str(), c.pass ? "" : "; first failure: ", c.first_failure.c_str(), elapsed() - t0);
    if (i == 5) std::fputs(security_table.c_str(), stdout);
    if (i == 6) std::fputs(importance_table.c_str(), stdout);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", passed, criteria.size(), elapsed());
  return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}
