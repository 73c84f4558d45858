#include "pointgen/sdf_shape.hpp"

#include <algorithm>
#include <cmath>

#include "pointgen/error.hpp"

namespace pointgen::synth {

namespace {

double box_sdf(const Vec3& p, const Vec3& half, double round) {
  const Vec3 q{std::abs(p.x) - half.x, std::abs(p.y) - half.y,
               std::abs(p.z) - half.z};
  const Vec3 qpos{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
  const double outside = qpos.norm();
  const double inside = std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
  return outside + inside - round;
}

// Sign-exact implicit test; the approximate SDF below is only used for
// marching distances.
double ellipsoid_implicit(const Vec3& p, const Vec3& r) {
  const double a = p.x / r.x, b = p.y / r.y, c = p.z / r.z;
  return a * a + b * b + c * c - 1.0;
}

double ellipsoid_sdf(const Vec3& p, const Vec3& r) {
  const Vec3 pr{p.x / r.x, p.y / r.y, p.z / r.z};
  const double k0 = pr.norm();
  const Vec3 pr2{p.x / (r.x * r.x), p.y / (r.y * r.y), p.z / (r.z * r.z)};
  const double k1 = pr2.norm();
  if (k1 == 0.0) return -std::min(r.x, std::min(r.y, r.z));
  return k0 * (k0 - 1.0) / k1;
}

double cylinder_sdf(const Vec3& p, double radius, double half_h) {
  const double dr = std::sqrt(p.x * p.x + p.y * p.y) - radius;
  const double dz = std::abs(p.z) - half_h;
  const double outside =
      std::sqrt(std::max(dr, 0.0) * std::max(dr, 0.0) +
                std::max(dz, 0.0) * std::max(dz, 0.0));
  return outside + std::min(std::max(dr, dz), 0.0);
}

}  // namespace

double Primitive::sdf(const Vec3& p) const {
  const Vec3 q = p - center;
  switch (kind) {
    case PrimitiveKind::box:
      return box_sdf(q, half, round);
    case PrimitiveKind::ellipsoid:
      return ellipsoid_sdf(q, half);
    case PrimitiveKind::cylinder_z:
      return cylinder_sdf(q, half.x, half.z);
  }
  return 0.0;
}

bool Primitive::inside(const Vec3& p) const {
  const Vec3 q = p - center;
  switch (kind) {
    case PrimitiveKind::box: {
      if (round <= 0.0)
        return std::abs(q.x) < half.x && std::abs(q.y) < half.y &&
               std::abs(q.z) < half.z;
      return box_sdf(q, half, round) < 0.0;
    }
    case PrimitiveKind::ellipsoid:
      return ellipsoid_implicit(q, half) < 0.0;
    case PrimitiveKind::cylinder_z:
      return cylinder_sdf(q, half.x, half.z) < 0.0;
  }
  return false;
}

double Primitive::surface_area() const {
  switch (kind) {
    case PrimitiveKind::box: {
      const double a = 2 * (half.x + round), b = 2 * (half.y + round),
                   c = 2 * (half.z + round);
      return 2.0 * (a * b + b * c + c * a);
    }
    case PrimitiveKind::ellipsoid: {
      // Thomsen's approximation, adequate for sampling weights.
      const double p = 1.6075;
      const double ap = std::pow(half.x, p), bp = std::pow(half.y, p),
                   cp = std::pow(half.z, p);
      return 4.0 * 3.141592653589793 *
             std::pow((ap * bp + bp * cp + cp * ap) / 3.0, 1.0 / p);
    }
    case PrimitiveKind::cylinder_z: {
      const double r = half.x, h = 2 * half.z;
      return 2.0 * 3.141592653589793 * r * (r + h);
    }
  }
  return 0.0;
}

Vec3 Primitive::sample_surface(Rng& rng) const {
  switch (kind) {
    case PrimitiveKind::box: {
      const Vec3 h{half.x + round, half.y + round, half.z + round};
      const double ax = h.y * h.z, ay = h.x * h.z, az = h.x * h.y;
      const double total = ax + ay + az;
      double pick = rng.uniform(0.0, total);
      const double sgn = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      Vec3 p{rng.uniform(-h.x, h.x), rng.uniform(-h.y, h.y),
             rng.uniform(-h.z, h.z)};
      if (pick < ax)
        p.x = sgn * h.x;
      else if (pick < ax + ay)
        p.y = sgn * h.y;
      else
        p.z = sgn * h.z;
      return center + p;
    }
    case PrimitiveKind::ellipsoid: {
      // Direction-uniform; slight area bias on eccentric ellipsoids is fine
      // for this data generator.
      double x, y, z, n2;
      do {
        x = rng.normal();
        y = rng.normal();
        z = rng.normal();
        n2 = x * x + y * y + z * z;
      } while (n2 < 1e-12);
      const double inv = 1.0 / std::sqrt(n2);
      return center + Vec3{half.x * x * inv, half.y * y * inv, half.z * z * inv};
    }
    case PrimitiveKind::cylinder_z: {
      const double r = half.x, hh = half.z;
      const double side_area = 2.0 * 3.141592653589793 * r * (2 * hh);
      const double cap_area = 2.0 * 3.141592653589793 * r * r;
      const double theta = rng.uniform(0.0, 2.0 * 3.141592653589793);
      if (rng.uniform(0.0, side_area + cap_area) < side_area) {
        return center + Vec3{r * std::cos(theta), r * std::sin(theta),
                             rng.uniform(-hh, hh)};
      }
      const double rr = r * std::sqrt(rng.uniform01());
      const double zz = rng.uniform01() < 0.5 ? -hh : hh;
      return center + Vec3{rr * std::cos(theta), rr * std::sin(theta), zz};
    }
  }
  return center;
}

double SdfShape::sdf(const Vec3& p) const {
  double d = 1e30;
  for (const auto& prim : primitives) d = std::min(d, prim.sdf(p));
  return d;
}

Vec3 SdfShape::sdf_gradient(const Vec3& p, double h) const {
  return {(sdf({p.x + h, p.y, p.z}) - sdf({p.x - h, p.y, p.z})) / (2 * h),
          (sdf({p.x, p.y + h, p.z}) - sdf({p.x, p.y - h, p.z})) / (2 * h),
          (sdf({p.x, p.y, p.z + h}) - sdf({p.x, p.y, p.z - h})) / (2 * h)};
}

bool SdfShape::inside_any_except(const Vec3& p, std::size_t skip) const {
  for (std::size_t i = 0; i < primitives.size(); ++i)
    if (i != skip && primitives[i].inside(p)) return true;
  return false;
}

PointCloud SdfShape::sample_surface(std::size_t n, std::uint64_t seed) const {
  if (primitives.empty()) throw ConfigError("sample_surface: no primitives");
  Rng rng(seed);
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& prim : primitives) {
    total += prim.surface_area();
    cumulative.push_back(total);
  }
  PointCloud pc;
  pc.points.reserve(n);
  std::size_t attempts = 0;
  const std::size_t max_attempts = n * 64;
  while (pc.points.size() < n) {
    if (++attempts > max_attempts)
      throw DegenerateGeometryError(
          "sample_surface: rejection rate too high (buried primitives?)");
    const double pick = rng.uniform(0.0, total);
    std::size_t pi = 0;
    while (pi + 1 < cumulative.size() && pick >= cumulative[pi]) ++pi;
    const Vec3 p = primitives[pi].sample_surface(rng);
    if (inside_any_except(p, pi)) continue;  // buried in the union interior
    pc.points.push_back(p);
  }
  return pc;
}

void SdfShape::transform(const Vec3& translate, double scale) {
  for (auto& prim : primitives) {
    prim.center = (prim.center + translate) * scale;
    prim.half = prim.half * scale;
    prim.round *= scale;
  }
}

}  // namespace pointgen::synth
