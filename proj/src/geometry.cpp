#include "pointgen/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pointgen/error.hpp"
#include "pointgen/rng.hpp"

namespace pointgen::geometry {

PointCloud normalize(const PointCloud& pc) {
  if (pc.points.empty()) throw DegenerateGeometryError("normalize: empty cloud");
  if (!pc.all_finite()) throw DegenerateGeometryError("normalize: non-finite point");
  const Vec3 c = pc.centroid();
  const double extent = pc.max_half_extent(c);
  if (extent <= 0.0)
    throw DegenerateGeometryError("normalize: zero extent (all points identical)");
  const double s = 0.5 / extent;
  PointCloud out;
  out.frame_tag = FrameTag::normalized;
  out.points.reserve(pc.points.size());
  for (const auto& p : pc.points) out.points.push_back((p - c) * s);
  return out;
}

std::vector<int> sample_indices(std::size_t source_size, std::size_t n,
                                std::uint64_t seed) {
  if (source_size == 0) throw DegenerateGeometryError("sample_n: empty cloud");
  if (n == 0) throw ConfigError("sample_n: n must be >= 1");
  Rng rng(seed);
  std::vector<int> out;
  out.reserve(n);
  if (source_size >= n) {
    // Partial Fisher-Yates; first draw is uniform_int(source_size), matching
    // the first pick of farthest_point_sample for the same seed.
    std::vector<int> idx(source_size);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.uniform_int(
                  static_cast<std::int64_t>(source_size - i)));
      std::swap(idx[i], idx[j]);
      out.push_back(idx[i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(static_cast<int>(
          rng.uniform_int(static_cast<std::int64_t>(source_size))));
  }
  return out;
}

PointCloud sample_n(const PointCloud& pc, std::size_t n, std::uint64_t seed) {
  const auto idx = sample_indices(pc.points.size(), n, seed);
  PointCloud out;
  out.frame_tag = pc.frame_tag;
  out.points.reserve(n);
  for (int i : idx) out.points.push_back(pc.points[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<int> farthest_point_sample(const PointCloud& pc, std::size_t k,
                                       std::uint64_t seed) {
  const std::size_t n = pc.points.size();
  if (n == 0) throw DegenerateGeometryError("farthest_point_sample: empty cloud");
  if (k < 1 || k > n)
    throw ConfigError("farthest_point_sample: k out of range [1, N]");
  Rng rng(seed);
  std::vector<int> selected;
  selected.reserve(k);
  int cur = static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(n)));
  selected.push_back(cur);
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  for (std::size_t step = 1; step < k; ++step) {
    const Vec3& last = pc.points[static_cast<std::size_t>(cur)];
    int best = -1;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = dist2(pc.points[i], last);
      if (d2 < min_d2[i]) min_d2[i] = d2;
      if (min_d2[i] > best_d2) {  // strict >: ties keep the lowest index
        best_d2 = min_d2[i];
        best = static_cast<int>(i);
      }
    }
    cur = best;
    selected.push_back(cur);
  }
  return selected;
}

std::vector<NeighborhoodGroup> ball_query(const PointCloud& pc,
                                          const std::vector<int>& centers,
                                          double radius, std::size_t max_k) {
  if (radius <= 0.0) throw ConfigError("ball_query: radius must be positive");
  if (max_k < 1) throw ConfigError("ball_query: max_k must be >= 1");
  const int n = static_cast<int>(pc.points.size());
  std::vector<NeighborhoodGroup> groups;
  groups.reserve(centers.size());
  const double r2 = radius * radius;
  for (int c : centers) {
    if (c < 0 || c >= n) throw ConfigError("ball_query: center index out of range");
    NeighborhoodGroup g;
    g.center_index = c;
    g.radius = radius;
    const Vec3& cp = pc.points[static_cast<std::size_t>(c)];
    // The center always belongs to its own group; remaining slots go to the
    // lowest-index points within the radius.
    g.member_indices.push_back(c);
    for (int i = 0; i < n && g.member_indices.size() < max_k; ++i) {
      if (i == c) continue;
      if (dist2(pc.points[static_cast<std::size_t>(i)], cp) <= r2)
        g.member_indices.push_back(i);
    }
    std::sort(g.member_indices.begin(), g.member_indices.end());
    groups.push_back(std::move(g));
  }
  return groups;
}

GroupedBlocks group_features(const PointCloud& pc,
                             const std::vector<NeighborhoodGroup>& groups,
                             const Tensor* point_features, std::size_t max_k) {
  const int n = static_cast<int>(pc.points.size());
  int fw = 0;
  if (point_features != nullptr) {
    if (point_features->rank() != 2 || point_features->dim(0) != n)
      throw ConfigError("group_features: feature rows must match point count");
    fw = point_features->dim(1);
  }
  const int g_count = static_cast<int>(groups.size());
  const int row_w = 3 + fw;
  GroupedBlocks out;
  out.blocks = Tensor({g_count, static_cast<int>(max_k), row_w});
  out.mask = Tensor({g_count, static_cast<int>(max_k)});
  out.member_indices.reserve(groups.size());
  for (int gi = 0; gi < g_count; ++gi) {
    const auto& g = groups[static_cast<std::size_t>(gi)];
    if (g.member_indices.empty() || g.member_indices.size() > max_k)
      throw ConfigError("group_features: bad group size");
    const Vec3& cp = pc.points[static_cast<std::size_t>(g.center_index)];
    for (std::size_t k = 0; k < max_k; ++k) {
      const bool real = k < g.member_indices.size();
      const int src = real ? g.member_indices[k] : g.center_index;
      if (src < 0 || src >= n) throw ConfigError("group_features: index out of range");
      const Vec3 rel = pc.points[static_cast<std::size_t>(src)] - cp;
      double* row = out.blocks.data() +
                    (static_cast<std::size_t>(gi) * max_k + k) * row_w;
      row[0] = rel.x;
      row[1] = rel.y;
      row[2] = rel.z;
      if (fw > 0) {
        const double* f = point_features->data() +
                          static_cast<std::size_t>(src) * fw;
        for (int j = 0; j < fw; ++j) row[3 + j] = f[j];
      }
      out.mask.at2(gi, static_cast<int>(k)) = real ? 1.0 : 0.0;
    }
    out.member_indices.push_back(g.member_indices);
  }
  return out;
}

}  // namespace pointgen::geometry
