#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pointgen/point_cloud.hpp"
#include "pointgen/tensor.hpp"

namespace pointgen::geometry {

struct NeighborhoodGroup {
  int center_index = 0;
  std::vector<int> member_indices;  // ascending; always contains center_index
  double radius = 0.0;
};

// Grouped coordinate/feature blocks for one set-abstraction scale.
// blocks: (num_groups, max_k, 3 + feature_width), rows are member - center
// coordinates followed by the member's features. Rows past the real member
// count repeat the center row; mask marks real rows with 1.
struct GroupedBlocks {
  Tensor blocks;
  Tensor mask;                       // (num_groups, max_k), 1.0 real / 0.0 pad
  std::vector<std::vector<int>> member_indices;
};

// Centroid to origin, uniform scale so the farthest coordinate from the
// centroid lands at exactly 0.5. Throws DegenerateGeometryError on zero
// extent.
PointCloud normalize(const PointCloud& pc);

// n points drawn uniformly with a seeded generator; without replacement when
// the source has at least n points, with replacement otherwise. Preserves the
// source frame tag.
PointCloud sample_n(const PointCloud& pc, std::size_t n, std::uint64_t seed);
std::vector<int> sample_indices(std::size_t source_size, std::size_t n,
                                std::uint64_t seed);

// Greedy max-min farthest point sampling. First index is a seeded uniform
// draw; ties break to the lowest index.
std::vector<int> farthest_point_sample(const PointCloud& pc, std::size_t k,
                                       std::uint64_t seed);

// Fixed-radius neighborhoods around the given centers. Each group holds the
// center plus the lowest-index points within radius, at most max_k members
// total, sorted ascending by source index.
std::vector<NeighborhoodGroup> ball_query(const PointCloud& pc,
                                          const std::vector<int>& centers,
                                          double radius, std::size_t max_k);

// point_features: nullptr or (N, F) tensor aligned with pc.
GroupedBlocks group_features(const PointCloud& pc,
                             const std::vector<NeighborhoodGroup>& groups,
                             const Tensor* point_features, std::size_t max_k);

}  // namespace pointgen::geometry
