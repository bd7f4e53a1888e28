#include "sevc/crypto.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <mutex>
#include <string>

namespace sevc {

std::string_view element_class_name(ElementClass c) {
  switch (c) {
    case ElementClass::kLumaIpm: return "ipm";
    case ElementClass::kMvdValue: return "mvdv";
    case ElementClass::kMvdSign: return "mvds";
    case ElementClass::kResidualSign: return "rsign";
  }
  return "?";
}

std::optional<ElementClass> parse_element_class(std::string_view name) {
  for (ElementClass c : kAllElementClasses) {
    if (element_class_name(c) == name) return c;
  }
  return std::nullopt;
}

std::uint8_t EncryptionConfig::parse_classes(std::string_view list) {
  std::uint8_t mask = 0;
  while (!list.empty()) {
    const auto comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) {
      const auto c = parse_element_class(item);
      if (!c) throw Error("unknown element class '" + std::string(item) + "'");
      mask |= static_cast<std::uint8_t>(1u << static_cast<int>(*c));
    }
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return mask;
}

Key128 parse_key_hex(std::string_view hex) {
  if (hex.size() != 32) throw Error("key must be 32 hex characters");
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw Error("key contains a non-hex character");
  };
  Key128 key{};
  for (std::size_t i = 0; i < key.size(); ++i) {
    key[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return key;
}

std::string key_to_hex(const Key128& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : key) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

// ---------------------------------------------------------------------------

Block128 derive_counter_block(std::uint64_t nonce, const UnitContext& ctx) {
  if (ctx.frame_index > kMaxFrameIndex) throw Error("frame index exceeds counter field");
  if (ctx.x > kMaxCoordinate || ctx.y > kMaxCoordinate) throw Error("unit position exceeds counter field");
  if (ctx.ordinal > kMaxOrdinal) throw Error("element ordinal exceeds counter field");
  const std::uint64_t frame = ctx.frame_index | ((ctx.ordinal >> 8) << 20);
  const std::uint64_t low = (frame << 40) | (static_cast<std::uint64_t>(ctx.x) << 26) |
                            (static_cast<std::uint64_t>(ctx.y) << 12) |
                            (static_cast<std::uint64_t>(ctx.tag) << 8) | (ctx.ordinal & 0xFFu);
  Block128 block{};
  for (int i = 0; i < 8; ++i) {
    block[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(nonce >> (56 - 8 * i));
    block[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(low >> (56 - 8 * i));
  }
  return block;
}

void check_counter_capacity(int width, int height, int frame_count) {
  if (width - 1 > static_cast<int>(kMaxCoordinate) || height - 1 > static_cast<int>(kMaxCoordinate)) {
    throw Error("picture too large for the counter layout (max 16384 samples per side)");
  }
  if (frame_count - 1 > static_cast<int>(kMaxFrameIndex)) {
    throw Error("sequence too long for the counter layout");
  }
}

struct Aes128Cipher::Impl {
  EVP_CIPHER_CTX* ctx = nullptr;
  std::mutex mutex;
};

Aes128Cipher::Aes128Cipher(const Key128& key) : impl_(std::make_unique<Impl>()) {
  impl_->ctx = EVP_CIPHER_CTX_new();
  if (impl_->ctx == nullptr ||
      EVP_EncryptInit_ex(impl_->ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr) != 1) {
    if (impl_->ctx != nullptr) EVP_CIPHER_CTX_free(impl_->ctx);
    throw Error("AES-128 initialisation failed");
  }
  EVP_CIPHER_CTX_set_padding(impl_->ctx, 0);
}

Aes128Cipher::~Aes128Cipher() {
  if (impl_ && impl_->ctx != nullptr) EVP_CIPHER_CTX_free(impl_->ctx);
}

Block128 Aes128Cipher::encrypt_block(const Block128& in) const {
  Block128 out{};
  int len = 0;
  std::lock_guard lock(impl_->mutex);
  if (EVP_EncryptUpdate(impl_->ctx, out.data(), &len, in.data(), static_cast<int>(in.size())) != 1 ||
      len != 16) {
    throw Error("AES-128 block encryption failed");
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t load_be64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

Block128 SeededStubCipher::encrypt_block(const Block128& in) const {
  const std::uint64_t hi = splitmix64(seed_ ^ splitmix64(load_be64(in.data())));
  const std::uint64_t lo = splitmix64(hi ^ load_be64(in.data() + 8));
  Block128 out{};
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
    out[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
  }
  return out;
}

std::uint64_t keystream_bits(const BlockCipher& cipher, std::uint64_t nonce, const UnitContext& ctx,
                             int n) {
  if (n < 1 || n > 64) throw Error("keystream request must be 1..64 bits");
  const Block128 out = cipher.encrypt_block(derive_counter_block(nonce, ctx));
  const std::uint64_t low = load_be64(out.data() + 8);
  return n == 64 ? low : low & ((std::uint64_t{1} << n) - 1u);
}

int range_width(std::uint32_t max_value) { return std::max(1, static_cast<int>(std::bit_width(max_value))); }

std::uint32_t ranged_xor(std::uint32_t v, std::uint32_t max_value, std::uint32_t chunk) {
  if (v > max_value) throw Error("ranged_xor input exceeds its range");
  const std::uint32_t x = v ^ chunk;
  return x <= max_value ? x : v;
}

// ---------------------------------------------------------------------------

IpmSyntax encrypt_ipm(IpmSyntax ipm, const Keystream& ks, UnitContext ctx) {
  ctx.tag = ElementClass::kLumaIpm;
  const int width = ipm_encrypted_bits(ipm);
  const auto chunk = static_cast<std::uint32_t>(ks.bits(ctx, width));
  if (ipm.is_mpm) {
    ipm.mpm_index = static_cast<int>(ranged_xor(static_cast<std::uint32_t>(ipm.mpm_index), kMaxMpmIndex, chunk));
  } else {
    ipm.rem_mode = static_cast<int>(ranged_xor(static_cast<std::uint32_t>(ipm.rem_mode), kMaxRemMode, chunk));
  }
  return ipm;
}

int ipm_encrypted_bits(const IpmSyntax& ipm) {
  return ipm.is_mpm ? range_width(kMaxMpmIndex) : range_width(kMaxRemMode);
}

MvdSyntax encrypt_mvd_value(MvdSyntax mvd, const Keystream& ks, UnitContext ctx) {
  if (!mvd.greater1) return mvd;
  ctx.tag = ElementClass::kMvdValue;
  const auto chunk = static_cast<std::uint32_t>(ks.bits(ctx, kMvdRiceParam));
  mvd.abs_minus_2 ^= chunk;  // suffix bits only: the unary prefix length is unchanged
  return mvd;
}

MvdSyntax encrypt_mvd_sign(MvdSyntax mvd, const Keystream& ks, UnitContext ctx) {
  if (!mvd.greater0) return mvd;
  ctx.tag = ElementClass::kMvdSign;
  mvd.sign = mvd.sign != (ks.bits(ctx, 1) != 0);
  return mvd;
}

std::uint32_t encrypt_sign_pattern(std::vector<std::uint8_t>& pattern, const Keystream& ks,
                                   UnitContext ctx) {
  ctx.tag = ElementClass::kResidualSign;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    const int n = static_cast<int>(std::min<std::size_t>(64, pattern.size() - pos));
    const std::uint64_t chunk = ks.bits(ctx, n);
    for (int i = 0; i < n; ++i) pattern[pos + static_cast<std::size_t>(i)] ^= static_cast<std::uint8_t>((chunk >> (n - 1 - i)) & 1u);
    pos += static_cast<std::size_t>(n);
    ++ctx.ordinal;
  }
  return ctx.ordinal;
}

}  // namespace sevc
