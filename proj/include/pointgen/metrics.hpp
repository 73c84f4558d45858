#pragma once

#include <string>
#include <vector>

#include "pointgen/point_cloud.hpp"

namespace pointgen::metrics {

struct ChamferResult {
  // Sum over both directions of squared nearest-neighbor distances.
  double sum_sq = 0.0;
  // Half the sum of the two directional means of squared nearest distances;
  // the number reported by evaluation tables.
  double mean_per_point = 0.0;
};

ChamferResult chamfer(const PointCloud& s1, const PointCloud& s2);

// Max over both directions of the max-min Euclidean distance (unsquared).
double hausdorff(const PointCloud& s1, const PointCloud& s2);

// Occupancy grid over the normalized unit cube [-0.5, 0.5]^3.
struct VoxelGrid {
  int resolution = 0;
  std::vector<bool> occupancy;  // resolution^3, x-major then y then z

  std::size_t cell_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * resolution + iy) * resolution + iz;
  }
  std::size_t occupied_count() const;
};

// Points exactly on the upper boundary clamp into the last cell. Requires a
// cloud in the normalized frame.
VoxelGrid voxelize(const PointCloud& pc, int resolution);

// |A ∩ B| / |A ∪ B|; 1.0 when both grids are empty.
double iou(const VoxelGrid& a, const VoxelGrid& b);

// Line-delimited metric records consumed by aggregation and plotting.
struct MetricRecord {
  std::string sample_id;
  std::string category;
  std::string metric_name;
  double value = 0.0;
};

void write_metric_records(const std::string& path,
                          const std::vector<MetricRecord>& records);
std::vector<MetricRecord> read_metric_records(const std::string& path);

}  // namespace pointgen::metrics
