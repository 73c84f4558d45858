#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace pointgen {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
};

inline double dist2(const Vec3& a, const Vec3& b) { return (a - b).norm2(); }

enum class FrameTag { raw, normalized };

// Ordered point list in a model frame. frame_tag == normalized means the
// points live in the unit cube [-0.5, 0.5]^3; clouds produced directly by
// normalize() additionally have centroid 0 and max half-extent exactly 0.5.
struct PointCloud {
  std::vector<Vec3> points;
  FrameTag frame_tag = FrameTag::raw;

  std::size_t size() const { return points.size(); }
  bool all_finite() const;
  Vec3 centroid() const;
  // Largest |coordinate - center coordinate| over points and axes.
  double max_half_extent(const Vec3& center) const;
};

// Text format: one "x y z" line per point.
void save_point_cloud_txt(const std::string& path, const PointCloud& pc);
PointCloud load_point_cloud_txt(const std::string& path, FrameTag tag);

// Binary format: magic "PC3D", u64 count, then count * 3 little-endian f32.
// Exact round-trip: save(load(f)) reproduces f byte for byte.
void save_point_cloud_bin(const std::string& path, const PointCloud& pc);
PointCloud load_point_cloud_bin(const std::string& path, FrameTag tag);

// Order-independent content hash over coordinates quantized to 1e-6.
std::uint64_t cloud_content_hash(const PointCloud& pc);

}  // namespace pointgen
