#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sevc {

struct CuRect {
  int x = 0;
  int y = 0;
  int size = 0;

  bool operator==(const CuRect&) const = default;
};

struct PartitionConfig {
  int ctu_size = 32;
  int min_cu_size = 8;
  int max_depth = 2;

  // Depth bound after accounting for min_cu_size.
  int depth_limit() const;
};

// Quadtree over one CTU, stored as nodes in depth-first pre-order. A split
// node is followed by its four children (z-order); leaves are coding units.
struct PartitionTree {
  struct Node {
    CuRect rect;
    int depth = 0;
    bool split = false;

    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;

  // Leaves in coding (z-) order.
  std::vector<CuRect> leaves() const;
  bool operator==(const PartitionTree&) const = default;
};

struct UnitCost {
  double bits = 0.0;
  double distortion = 0.0;
};

using UnitCostFn = std::function<UnitCost(const CuRect&)>;

// Lagrange multiplier 0.85 * 2^((qp - 12) / 3).
double lambda_for_qp(int qp);

// Rate-distortion quadtree: a node is split iff the summed cost of its best
// children plus the split flag is lower than its own leaf cost, where
// cost = distortion + lambda * bits. `split_bits[f]` is the rate of a split
// flag with value f (only charged below the depth limit).
PartitionTree partition_ctu(int ctu_x, int ctu_y, const PartitionConfig& config, double lambda,
                            const UnitCostFn& cost, const double (&split_bits)[2]);
PartitionTree partition_ctu(int ctu_x, int ctu_y, const PartitionConfig& config, double lambda,
                            const UnitCostFn& cost);

// One flag per node above the depth limit, pre-order.
std::vector<std::uint8_t> split_flags(const PartitionTree& tree, const PartitionConfig& config);

// Rebuilds a tree from split flags. `next_flag` returns successive flags;
// it is only called for nodes above the depth limit.
PartitionTree parse_partition(int ctu_x, int ctu_y, const PartitionConfig& config,
                              const std::function<int()>& next_flag);
PartitionTree parse_partition(int ctu_x, int ctu_y, const PartitionConfig& config,
                              std::span<const std::uint8_t> flags);

}  // namespace sevc
