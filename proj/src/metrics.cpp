#include "pointgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pointgen/error.hpp"

namespace pointgen::metrics {

namespace {

// Sum over points of a of the squared distance to their nearest point in b.
double directional_min_sq_sum(const PointCloud& a, const PointCloud& b) {
  double total = 0.0;
  for (const auto& p : a.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b.points) best = std::min(best, dist2(p, q));
    total += best;
  }
  return total;
}

double directional_max_min(const PointCloud& a, const PointCloud& b) {
  double worst = 0.0;
  for (const auto& p : a.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b.points) best = std::min(best, dist2(p, q));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

ChamferResult chamfer(const PointCloud& s1, const PointCloud& s2) {
  if (s1.points.empty() || s2.points.empty())
    throw DegenerateGeometryError("chamfer: empty cloud");
  const double d12 = directional_min_sq_sum(s1, s2);
  const double d21 = directional_min_sq_sum(s2, s1);
  ChamferResult r;
  r.sum_sq = d12 + d21;
  r.mean_per_point = 0.5 * (d12 / static_cast<double>(s1.points.size()) +
                            d21 / static_cast<double>(s2.points.size()));
  return r;
}

double hausdorff(const PointCloud& s1, const PointCloud& s2) {
  if (s1.points.empty() || s2.points.empty())
    throw DegenerateGeometryError("hausdorff: empty cloud");
  return std::max(directional_max_min(s1, s2), directional_max_min(s2, s1));
}

std::size_t VoxelGrid::occupied_count() const {
  std::size_t n = 0;
  for (bool b : occupancy)
    if (b) ++n;
  return n;
}

VoxelGrid voxelize(const PointCloud& pc, int resolution) {
  if (resolution < 2) throw ConfigError("voxelize: resolution must be >= 2");
  if (pc.points.empty()) throw DegenerateGeometryError("voxelize: empty cloud");
  if (pc.frame_tag != FrameTag::normalized)
    throw ConfigError("voxelize: cloud must be in the normalized frame");
  VoxelGrid grid;
  grid.resolution = resolution;
  grid.occupancy.assign(static_cast<std::size_t>(resolution) * resolution *
                            resolution,
                        false);
  const double res = static_cast<double>(resolution);
  auto cell = [&](double v) {
    if (v < -0.5 - 1e-9 || v > 0.5 + 1e-9)
      throw ConfigError("voxelize: coordinate outside the normalized cube");
    int i = static_cast<int>(std::floor((v + 0.5) * res));
    return std::clamp(i, 0, resolution - 1);
  };
  for (const auto& p : pc.points)
    grid.occupancy[grid.cell_index(cell(p.x), cell(p.y), cell(p.z))] = true;
  return grid;
}

double iou(const VoxelGrid& a, const VoxelGrid& b) {
  if (a.resolution != b.resolution)
    throw ConfigError("iou: resolution mismatch");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.occupancy.size(); ++i) {
    const bool oa = a.occupancy[i], ob = b.occupancy[i];
    if (oa && ob) ++inter;
    if (oa || ob) ++uni;
  }
  if (uni == 0) return 1.0;  // vacuous agreement of two empty grids
  return static_cast<double>(inter) / static_cast<double>(uni);
}

void write_metric_records(const std::string& path,
                          const std::vector<MetricRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  for (const auto& r : records)
    out << r.sample_id << '\t' << r.category << '\t' << r.metric_name << '\t'
        << r.value << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::vector<MetricRecord> read_metric_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<MetricRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    MetricRecord r;
    if (!(std::getline(ls, r.sample_id, '\t') &&
          std::getline(ls, r.category, '\t') &&
          std::getline(ls, r.metric_name, '\t') && (ls >> r.value)))
      throw IoError("bad metric record in " + path);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace pointgen::metrics
