#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sevc/inter.hpp"
#include "sevc/intra.hpp"
#include "sevc/media_io.hpp"

namespace sevc {

// Syntax element classes eligible for encryption. Values double as the
// header flag bit positions and as the counter-block element tag.
enum class ElementClass : std::uint8_t {
  kLumaIpm = 0,
  kMvdValue = 1,
  kMvdSign = 2,
  kResidualSign = 3,
};

inline constexpr std::array<ElementClass, 4> kAllElementClasses{
    ElementClass::kLumaIpm, ElementClass::kMvdValue, ElementClass::kMvdSign,
    ElementClass::kResidualSign};

std::string_view element_class_name(ElementClass c);  // "ipm", "mvdv", "mvds", "rsign"
std::optional<ElementClass> parse_element_class(std::string_view name);

using Key128 = std::array<std::uint8_t, 16>;
using Block128 = std::array<std::uint8_t, 16>;

// Parses 32 hex characters. Throws Error otherwise.
Key128 parse_key_hex(std::string_view hex);
std::string key_to_hex(const Key128& key);

struct EncryptionConfig {
  std::uint8_t classes = 0;  // bit i set <=> ElementClass(i) enabled
  Key128 key{};
  std::uint64_t nonce = 0;

  bool enabled(ElementClass c) const { return (classes >> static_cast<int>(c)) & 1u; }
  void enable(ElementClass c) { classes |= static_cast<std::uint8_t>(1u << static_cast<int>(c)); }
  bool any() const { return classes != 0; }

  // Parses a comma-separated class list such as "ipm,mvdv"; "" is empty.
  static std::uint8_t parse_classes(std::string_view list);
};

// Position of one encrypted element inside the coded stream.
struct UnitContext {
  std::uint32_t frame_index = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  ElementClass tag = ElementClass::kLumaIpm;
  std::uint32_t ordinal = 0;

  bool operator==(const UnitContext&) const = default;
};

inline constexpr std::uint32_t kMaxFrameIndex = (1u << 20) - 1;  // upper nibble holds ordinal spill
inline constexpr std::uint32_t kMaxCoordinate = (1u << 14) - 1;
inline constexpr std::uint32_t kMaxOrdinal = (1u << 12) - 1;     // 8 bits + 4 spill bits

// Counter block: nonce(64) | frame(24) | x(14) | y(14) | tag(4) | ordinal(8),
// big-endian. Ordinals above 255 spill into the top nibble of the frame
// field. Throws Error when a field does not fit.
Block128 derive_counter_block(std::uint64_t nonce, const UnitContext& ctx);

// Throws Error when a picture of this size or length cannot be given unique
// counter blocks.
void check_counter_capacity(int width, int height, int frame_count);

// Pseudo-random permutation used to turn counter blocks into keystream.
class BlockCipher {
 public:
  virtual ~BlockCipher() = default;
  virtual Block128 encrypt_block(const Block128& in) const = 0;
};

class Aes128Cipher final : public BlockCipher {
 public:
  explicit Aes128Cipher(const Key128& key);
  ~Aes128Cipher() override;
  Aes128Cipher(const Aes128Cipher&) = delete;
  Aes128Cipher& operator=(const Aes128Cipher&) = delete;

  Block128 encrypt_block(const Block128& in) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Deterministic non-cryptographic stand-in for tests.
class SeededStubCipher final : public BlockCipher {
 public:
  explicit SeededStubCipher(std::uint64_t seed) : seed_(seed) {}
  Block128 encrypt_block(const Block128& in) const override;

 private:
  std::uint64_t seed_;
};

// Always yields zero blocks: every XOR becomes the identity.
class ZeroCipher final : public BlockCipher {
 public:
  Block128 encrypt_block(const Block128&) const override { return Block128{}; }
};

// Low-order n bits (1..64) of the cipher output for the context's counter.
std::uint64_t keystream_bits(const BlockCipher& cipher, std::uint64_t nonce, const UnitContext& ctx,
                             int n);

// Bits needed to represent every value in [0, max_value].
int range_width(std::uint32_t max_value);

// XOR that stays in [0, max_value]: returns v ^ chunk when that is in range,
// otherwise v. Self-inverse for a fixed chunk.
std::uint32_t ranged_xor(std::uint32_t v, std::uint32_t max_value, std::uint32_t chunk);

// Keystream source bound to one stream's cipher and nonce.
class Keystream {
 public:
  Keystream(const BlockCipher& cipher, std::uint64_t nonce) : cipher_(&cipher), nonce_(nonce) {}
  std::uint64_t bits(const UnitContext& ctx, int n) const {
    return keystream_bits(*cipher_, nonce_, ctx, n);
  }

 private:
  const BlockCipher* cipher_;
  std::uint64_t nonce_;
};

// The element encryptors below are involutions: applying one twice with the
// same keystream and context restores the input. ctx.tag is set by each
// function; ctx.ordinal is taken as given.

// mpm_index is ranged-XORed within [0, 5] using 3 keystream bits, rem_mode
// within [0, 60] using 6. The is_mpm flag is never touched.
IpmSyntax encrypt_ipm(IpmSyntax ipm, const Keystream& ks, UnitContext ctx);

// Keystream bits an IPM element consumes (3 or 6).
int ipm_encrypted_bits(const IpmSyntax& ipm);

// XORs the k-bit Golomb-Rice suffix of abs_minus_2 when present.
MvdSyntax encrypt_mvd_value(MvdSyntax mvd, const Keystream& ks, UnitContext ctx);

// Flips the sign with one keystream bit when present.
MvdSyntax encrypt_mvd_sign(MvdSyntax mvd, const Keystream& ks, UnitContext ctx);

// XORs each bit (scan order, MSB-first chunks) with keystream; patterns longer
// than 64 bits consume successive ordinals starting at ctx.ordinal. Returns
// the first unused ordinal.
std::uint32_t encrypt_sign_pattern(std::vector<std::uint8_t>& pattern, const Keystream& ks,
                                   UnitContext ctx);

}  // namespace sevc
