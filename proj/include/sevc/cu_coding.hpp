#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sevc/entropy.hpp"
#include "sevc/inter.hpp"
#include "sevc/intra.hpp"
#include "sevc/ledger.hpp"
#include "sevc/partitioner.hpp"
#include "sevc/residual.hpp"

namespace sevc {

inline constexpr int kNumComponents = 3;

// Magnitudes above this are rejected by the parser.
inline constexpr std::uint32_t kMaxCoeffMagnitude = 1u << 16;

// Side of the transform tiles covering one component of a CU, and the number
// of tiles per row. Luma uses min(cu, 32); chroma min(cu / 2, 32).
int transform_size(int cu_size, int component);
int transform_tiles_per_row(int cu_size, int component);

// Syntax of one coding unit as it appears in the stream.
struct CuSyntax {
  CuRect rect;
  bool intra = true;
  IpmSyntax ipm;                        // intra only
  std::array<MvdSyntax, 2> mvd{};       // inter only; x then y
  std::array<std::vector<CoeffBlock>, kNumComponents> tus;  // tiles in raster order

  bool operator==(const CuSyntax&) const = default;
};

struct CtuSyntax {
  PartitionTree tree;
  std::vector<CuSyntax> cus;  // one per leaf, coding order

  bool operator==(const CtuSyntax&) const = default;
};

// Writers accept BinaryEncoder or BitEstimator.
template <class Sink>
void write_split_flag(Sink& sink, ContextSet& ctx, int flag);
template <class Sink>
void write_ipm(Sink& sink, ContextSet& ctx, const IpmSyntax& ipm);
template <class Sink>
void write_mvd(Sink& sink, ContextSet& ctx, const MvdSyntax& mvd);
template <class Sink>
void write_coeffs(Sink& sink, ContextSet& ctx, const CoeffBlock& block);
template <class Sink>
void write_cu(Sink& sink, ContextSet& ctx, const CuSyntax& cu, FrameType type);
template <class Sink>
void write_ctu(Sink& sink, ContextSet& ctx, const CtuSyntax& ctu, const PartitionConfig& config,
               FrameType type);

int read_split_flag(BinaryDecoder& dec, ContextSet& ctx);
IpmSyntax read_ipm(BinaryDecoder& dec, ContextSet& ctx);
MvdSyntax read_mvd(BinaryDecoder& dec, ContextSet& ctx);
CoeffBlock read_coeffs(BinaryDecoder& dec, ContextSet& ctx, int size);
CuSyntax read_cu(BinaryDecoder& dec, ContextSet& ctx, const CuRect& rect, FrameType type);
CtuSyntax read_ctu(BinaryDecoder& dec, ContextSet& ctx, int ctu_x, int ctu_y,
                   const PartitionConfig& config, FrameType type);

}  // namespace sevc
