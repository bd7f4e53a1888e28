#include "sevc/partitioner.hpp"

#include <cmath>

#include "sevc/media_io.hpp"

namespace sevc {

int PartitionConfig::depth_limit() const {
  int depth = 0;
  while (depth < max_depth && (ctu_size >> (depth + 1)) >= min_cu_size) ++depth;
  return depth;
}

std::vector<CuRect> PartitionTree::leaves() const {
  std::vector<CuRect> out;
  for (const auto& n : nodes) {
    if (!n.split) out.push_back(n.rect);
  }
  return out;
}

double lambda_for_qp(int qp) { return 0.85 * std::pow(2.0, (qp - 12) / 3.0); }

namespace {

CuRect child_rect(const CuRect& r, int i) {
  const int half = r.size / 2;
  return {r.x + (i & 1) * half, r.y + (i >> 1) * half, half};
}

struct Searcher {
  int limit;
  double lambda;
  const UnitCostFn& cost;
  const double (&split_bits)[2];

  double run(const CuRect& rect, int depth, std::vector<PartitionTree::Node>& out) const {
    const UnitCost leaf = cost(rect);
    const bool has_flag = depth < limit;
    const double leaf_total = leaf.distortion + lambda * (leaf.bits + (has_flag ? split_bits[0] : 0.0));
    if (!has_flag) {
      out.push_back({rect, depth, false});
      return leaf_total;
    }
    std::vector<PartitionTree::Node> children;
    double split_total = lambda * split_bits[1];
    for (int i = 0; i < 4; ++i) split_total += run(child_rect(rect, i), depth + 1, children);
    if (split_total < leaf_total) {
      out.push_back({rect, depth, true});
      out.insert(out.end(), children.begin(), children.end());
      return split_total;
    }
    out.push_back({rect, depth, false});
    return leaf_total;
  }
};

constexpr double kFlatFlagBits[2] = {1.0, 1.0};

}  // namespace

PartitionTree partition_ctu(int ctu_x, int ctu_y, const PartitionConfig& config, double lambda,
                            const UnitCostFn& cost, const double (&split_bits)[2]) {
  PartitionTree tree;
  const Searcher s{config.depth_limit(), lambda, cost, split_bits};
  s.run({ctu_x, ctu_y, config.ctu_size}, 0, tree.nodes);
  return tree;
}

PartitionTree partition_ctu(int ctu_x, int ctu_y, const PartitionConfig& config, double lambda,
                            const UnitCostFn& cost) {
  return partition_ctu(ctu_x, ctu_y, config, lambda, cost, kFlatFlagBits);
}

std::vector<std::uint8_t> split_flags(const PartitionTree& tree, const PartitionConfig& config) {
  const int limit = config.depth_limit();
  std::vector<std::uint8_t> flags;
  for (const auto& n : tree.nodes) {
    if (n.depth < limit) flags.push_back(n.split ? 1 : 0);
  }
  return flags;
}

namespace {

void parse_node(const CuRect& rect, int depth, int limit, const std::function<int()>& next_flag,
                std::vector<PartitionTree::Node>& out) {
  const bool split = depth < limit && next_flag() != 0;
  out.push_back({rect, depth, split});
  if (!split) return;
  for (int i = 0; i < 4; ++i) parse_node(child_rect(rect, i), depth + 1, limit, next_flag, out);
}

}  // namespace

PartitionTree parse_partition(int ctu_x, int ctu_y, const PartitionConfig& config,
                              const std::function<int()>& next_flag) {
  PartitionTree tree;
  parse_node({ctu_x, ctu_y, config.ctu_size}, 0, config.depth_limit(), next_flag, tree.nodes);
  return tree;
}

PartitionTree parse_partition(int ctu_x, int ctu_y, const PartitionConfig& config,
                              std::span<const std::uint8_t> flags) {
  std::size_t pos = 0;
  PartitionTree tree = parse_partition(ctu_x, ctu_y, config, [&]() -> int {
    if (pos >= flags.size()) throw FormatError("split flag sequence too short");
    return flags[pos++];
  });
  if (pos != flags.size()) throw FormatError("split flag sequence too long");
  return tree;
}

}  // namespace sevc
