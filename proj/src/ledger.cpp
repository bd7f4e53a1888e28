#include "sevc/ledger.hpp"

#include <sstream>
#include <string>

namespace sevc {

void EncryptionLedger::record(ElementClass c, FrameType t, std::uint64_t bits) {
  add(c, t, LedgerEntry{1, bits});
}

void EncryptionLedger::add(ElementClass c, FrameType t, const LedgerEntry& e) {
  entries_[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)] += e;
}

LedgerEntry EncryptionLedger::total(ElementClass c) const {
  LedgerEntry sum;
  for (const auto& e : entries_[static_cast<std::size_t>(c)]) sum += e;
  return sum;
}

LedgerEntry EncryptionLedger::total(FrameType t) const {
  LedgerEntry sum;
  for (const auto& row : entries_) sum += row[static_cast<std::size_t>(t)];
  return sum;
}

LedgerEntry EncryptionLedger::total() const {
  LedgerEntry sum;
  for (const auto& row : entries_) {
    for (const auto& e : row) sum += e;
  }
  return sum;
}

EncryptionLedger& EncryptionLedger::operator+=(const EncryptionLedger& o) {
  for (std::size_t c = 0; c < entries_.size(); ++c) {
    for (std::size_t t = 0; t < 2; ++t) entries_[c][t] += o.entries_[c][t];
  }
  return *this;
}

void EncryptionLedger::write_csv(std::ostream& out) const {
  out << "class,frame_type,elements,bits\n";
  for (ElementClass c : kAllElementClasses) {
    for (FrameType t : {FrameType::kIntra, FrameType::kInter}) {
      const auto& e = at(c, t);
      out << element_class_name(c) << ',' << (t == FrameType::kIntra ? 'I' : 'P') << ','
          << e.elements << ',' << e.bits << '\n';
    }
  }
}

EncryptionLedger EncryptionLedger::read_csv(std::istream& in) {
  EncryptionLedger ledger;
  std::string line;
  if (!std::getline(in, line) || line.rfind("class,frame_type,elements,bits", 0) != 0) {
    throw FormatError("ledger csv: missing header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cls, type, elements, bits;
    if (!std::getline(row, cls, ',') || !std::getline(row, type, ',') ||
        !std::getline(row, elements, ',') || !std::getline(row, bits)) {
      throw FormatError("ledger csv: malformed line " + std::to_string(line_no));
    }
    const auto c = parse_element_class(cls);
    if (!c || (type != "I" && type != "P")) {
      throw FormatError("ledger csv: bad class or frame type on line " + std::to_string(line_no));
    }
    try {
      ledger.add(*c, type == "I" ? FrameType::kIntra : FrameType::kInter,
                 LedgerEntry{std::stoull(elements), std::stoull(bits)});
    } catch (const std::logic_error&) {
      throw FormatError("ledger csv: bad number on line " + std::to_string(line_no));
    }
  }
  return ledger;
}

}  // namespace sevc
