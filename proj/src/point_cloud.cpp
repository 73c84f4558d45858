#include "pointgen/point_cloud.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pointgen/error.hpp"
#include "pointgen/hash.hpp"

namespace pointgen {

bool PointCloud::all_finite() const {
  for (const auto& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      return false;
  return true;
}

Vec3 PointCloud::centroid() const {
  Vec3 c;
  for (const auto& p : points) c = c + p;
  const double n = static_cast<double>(points.size());
  return {c.x / n, c.y / n, c.z / n};
}

double PointCloud::max_half_extent(const Vec3& center) const {
  double m = 0.0;
  for (const auto& p : points) {
    m = std::max(m, std::abs(p.x - center.x));
    m = std::max(m, std::abs(p.y - center.y));
    m = std::max(m, std::abs(p.z - center.z));
  }
  return m;
}

void save_point_cloud_txt(const std::string& path, const PointCloud& pc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  for (const auto& p : pc.points) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
  if (!out) throw IoError("write failed: " + path);
}

PointCloud load_point_cloud_txt(const std::string& path, FrameTag tag) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  PointCloud pc;
  pc.frame_tag = tag;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Vec3 p;
    if (!(ls >> p.x >> p.y >> p.z)) throw IoError("bad point line in " + path);
    pc.points.push_back(p);
  }
  if (pc.points.empty()) throw IoError("empty point cloud file: " + path);
  return pc;
}

namespace {

constexpr char kMagic[4] = {'P', 'C', '3', 'D'};

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f32(std::ofstream& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

float get_f32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

}  // namespace

void save_point_cloud_bin(const std::string& path, const PointCloud& pc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kMagic, 4);
  put_u64(out, pc.points.size());
  for (const auto& p : pc.points) {
    put_f32(out, static_cast<float>(p.x));
    put_f32(out, static_cast<float>(p.y));
    put_f32(out, static_cast<float>(p.z));
  }
  if (!out) throw IoError("write failed: " + path);
}

PointCloud load_point_cloud_bin(const std::string& path, FrameTag tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("bad magic in " + path);
  const std::uint64_t n = get_u64(in);
  if (n == 0) throw IoError("empty point cloud file: " + path);
  PointCloud pc;
  pc.frame_tag = tag;
  pc.points.resize(n);
  for (auto& p : pc.points) {
    p.x = get_f32(in);
    p.y = get_f32(in);
    p.z = get_f32(in);
  }
  if (!in) throw IoError("truncated point cloud file: " + path);
  return pc;
}

std::uint64_t cloud_content_hash(const PointCloud& pc) {
  // Sum of per-point hashes is invariant under point order.
  std::uint64_t acc = 0;
  for (const auto& p : pc.points) {
    std::uint64_t h = kFnvOffset;
    const std::int64_t q[3] = {std::llround(p.x * 1e6), std::llround(p.y * 1e6),
                               std::llround(p.z * 1e6)};
    for (std::int64_t v : q) h = fnv1a_u64(static_cast<std::uint64_t>(v), h);
    acc += h;
  }
  return fnv1a_u64(acc, fnv1a_u64(pc.points.size()));
}

}  // namespace pointgen
