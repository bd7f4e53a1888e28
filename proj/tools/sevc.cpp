#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>

#include "CLI11.hpp"
#include "sevc/codec.hpp"
#include "sevc/metrics.hpp"

namespace {

using namespace sevc;

// Command-line misuse that CLI11 cannot detect on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EncodeArgs {
  std::string input;
  int width = 0;
  int height = 0;
  int frames = 0;
  CodecParams params;
  std::string classes;
  std::string key;
  std::string out;
  std::string ledger;
  std::optional<std::uint64_t> nonce;
};

struct DecodeArgs {
  std::string in;
  std::string key;
  std::string out;
};

struct AnalyzeArgs {
  std::string ref;
  std::string test;
  int width = 0;
  int height = 0;
  int frames = 0;
  std::string csv;
  int edge_threshold = EdgeDetectorParams{}.threshold;
};

struct ReportArgs {
  std::uint64_t plain_bits = 0;
  std::uint64_t enc_bits = 0;
  std::string ledger;
  std::string csv;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// --key, then SEVC_KEY.
std::optional<Key128> resolve_key(const std::string& flag) {
  if (!flag.empty()) return parse_key_hex(flag);
  if (const char* env = std::getenv("SEVC_KEY"); env != nullptr && *env != '\0') return parse_key_hex(env);
  return std::nullopt;
}

std::uint64_t fresh_nonce() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

void print_ledger(const EncryptionLedger& ledger) {
  for (auto c : kAllElementClasses) {
    const auto t = ledger.total(c);
    std::printf("  %-6s elements %10llu  bits %12llu\n", std::string(element_class_name(c)).c_str(),
                static_cast<unsigned long long>(t.elements), static_cast<unsigned long long>(t.bits));
  }
  const auto t = ledger.total();
  std::printf("  %-6s elements %10llu  bits %12llu\n", "total", static_cast<unsigned long long>(t.elements),
              static_cast<unsigned long long>(t.bits));
}

int cmd_encode(const EncodeArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  EncodeJob job;
  job.params = a.params;
  job.encryption.classes = EncryptionConfig::parse_classes(a.classes);
  if (job.encryption.any()) {
    const auto key = resolve_key(a.key);
    if (!key) throw UsageError("--encrypt needs --key or SEVC_KEY");
    job.encryption.key = *key;
  }
  job.encryption.nonce = a.nonce ? *a.nonce : fresh_nonce();
  job.frames = read_yuv_file(a.input, a.width, a.height, a.frames);

  const auto result = encode(job);
  write_file(a.out, result.bitstream);
  if (!a.ledger.empty()) {
    auto out = open_output(a.ledger);
    result.ledger.write_csv(out);
    if (!out) throw Error("cannot write " + a.ledger);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::printf("frames %zu  payload bits %llu  stream bytes %zu\n", job.frames.size(),
              static_cast<unsigned long long>(result.payload_bits), result.bitstream.size());
  std::printf("encrypted classes: %s\n", a.classes.empty() ? "none" : a.classes.c_str());
  print_ledger(result.ledger);
  std::printf("wall time %.3f s\n", seconds);
  return 0;
}

int cmd_decode(const DecodeArgs& a) {
  DecodeOptions options;
  options.key = resolve_key(a.key);
  const auto stream = decode(read_file(a.in), options);
  write_yuv_file(stream.frames, a.out);
  std::printf("decoded %zu frames %dx%d%s\n", stream.frames.size(), stream.header.width, stream.header.height,
              stream.header.enc_flags != 0 && !options.key ? " (encrypted, no key)" : "");
  return 0;
}

int cmd_analyze(const AnalyzeArgs& a) {
  const auto ref = read_yuv_file(a.ref, a.width, a.height, a.frames);
  const auto test = read_yuv_file(a.test, a.width, a.height, a.frames);
  const auto rows = compare_sequences(ref, test, EdgeDetectorParams{a.edge_threshold});
  auto out = open_output(a.csv);
  write_metrics_csv(out, rows);
  if (!out) throw Error("cannot write " + a.csv);

  double psnr_sum = 0.0, ssim_sum = 0.0, edr_sum = 0.0;
  for (const auto& r : rows) {
    psnr_sum += std::isinf(r.psnr_db) ? kPsnrCsvCap : r.psnr_db;
    ssim_sum += r.ssim;
    edr_sum += r.edr;
  }
  const double n = static_cast<double>(rows.size());
  std::printf("frames %zu  mean psnr %.4f dB  mean ssim %.6f  mean edr %.6f\n", rows.size(), psnr_sum / n,
              ssim_sum / n, edr_sum / n);
  return 0;
}

int cmd_report(const ReportArgs& a) {
  std::ifstream in(a.ledger);
  if (!in) throw Error("cannot open " + a.ledger);
  const auto ledger = EncryptionLedger::read_csv(in);
  const double delta = bitrate_change(a.plain_bits, a.enc_bits);
  auto out = open_output(a.csv);
  write_report_csv(out, delta, encryption_space(ledger));
  if (!out) throw Error("cannot write " + a.csv);
  std::printf("bitrate delta %.6f\n", delta);
  print_ledger(ledger);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sevc: toy video codec with selective encryption"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Encode raw 4:2:0 video into a SEVC stream");
  encode_cmd->add_option("--input", enc.input, "Raw 8-bit 4:2:0 input")->required()->check(CLI::ExistingFile);
  encode_cmd->add_option("--width", enc.width)->required()->check(CLI::PositiveNumber);
  encode_cmd->add_option("--height", enc.height)->required()->check(CLI::PositiveNumber);
  encode_cmd->add_option("--frames", enc.frames)->required()->check(CLI::PositiveNumber);
  encode_cmd->add_option("--qp", enc.params.qp)->check(CLI::Range(0, 51))->capture_default_str();
  encode_cmd->add_option("--gop", enc.params.gop_size)->check(CLI::Range(1, 255))->capture_default_str();
  encode_cmd->add_option("--ctu", enc.params.ctu_size)->check(CLI::IsMember({8, 16, 32, 64, 128}))->capture_default_str();
  encode_cmd->add_option("--search-range", enc.params.search_range)->check(CLI::Range(0, kMaxSearchRange))->capture_default_str();
  encode_cmd->add_option("--encrypt", enc.classes, "Comma-separated subset of ipm,mvdv,mvds,rsign")->expected(0, 1);
  encode_cmd->add_option("--key", enc.key, "128-bit key as 32 hex digits (default: $SEVC_KEY)");
  encode_cmd->add_option("--nonce", enc.nonce, "Fixed 64-bit nonce instead of a random one");
  encode_cmd->add_option("--out", enc.out)->required();
  encode_cmd->add_option("--ledger", enc.ledger, "Write the encryption ledger CSV here");

  DecodeArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "Decode a SEVC stream to raw 4:2:0");
  decode_cmd->add_option("--in", dec.in)->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--key", dec.key, "128-bit key as 32 hex digits (default: $SEVC_KEY)");
  decode_cmd->add_option("--out", dec.out)->required();

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Per-frame PSNR, SSIM and EDR of two raw videos");
  analyze_cmd->add_option("--ref", an.ref)->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--test", an.test)->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--width", an.width)->required()->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--height", an.height)->required()->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--frames", an.frames)->required()->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--csv", an.csv)->required();
  analyze_cmd->add_option("--edge-threshold", an.edge_threshold)->check(CLI::NonNegativeNumber)->capture_default_str();

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Bitrate change and encryption space summary");
  report_cmd->add_option("--plain-bits", rep.plain_bits)->required();
  report_cmd->add_option("--enc-bits", rep.enc_bits)->required();
  report_cmd->add_option("--ledger", rep.ledger)->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--csv", rep.csv)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode_cmd) return cmd_encode(enc);
    if (*decode_cmd) return cmd_decode(dec);
    if (*analyze_cmd) return cmd_analyze(an);
    if (*report_cmd) return cmd_report(rep);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
