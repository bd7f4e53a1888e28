#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>

#include "sevc/crypto.hpp"

namespace sevc {

enum class FrameType : std::uint8_t { kIntra = 0, kInter = 1 };

struct LedgerEntry {
  std::uint64_t elements = 0;
  std::uint64_t bits = 0;

  LedgerEntry& operator+=(const LedgerEntry& o) {
    elements += o.elements;
    bits += o.bits;
    return *this;
  }
  bool operator==(const LedgerEntry&) const = default;
};

// Counts of encrypted syntax elements and keystream bits applied, per
// element class and frame type.
class EncryptionLedger {
 public:
  void record(ElementClass c, FrameType t, std::uint64_t bits);
  void add(ElementClass c, FrameType t, const LedgerEntry& e);

  const LedgerEntry& at(ElementClass c, FrameType t) const {
    return entries_[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
  }
  LedgerEntry total(ElementClass c) const;
  LedgerEntry total(FrameType t) const;
  LedgerEntry total() const;

  EncryptionLedger& operator+=(const EncryptionLedger& o);
  bool operator==(const EncryptionLedger&) const = default;

  // CSV with header `class,frame_type,elements,bits`, one row per class and
  // frame type (I/P).
  void write_csv(std::ostream& out) const;
  static EncryptionLedger read_csv(std::istream& in);

 private:
  std::array<std::array<LedgerEntry, 2>, 4> entries_{};
};

}  // namespace sevc
