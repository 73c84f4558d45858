#pragma once

#include <vector>

#include "pointgen/point_cloud.hpp"
#include "pointgen/rng.hpp"

namespace pointgen::synth {

enum class PrimitiveKind { box, ellipsoid, cylinder_z };

// One convex solid. Boxes may carry a rounding radius; cylinders are capped
// and aligned with the z axis.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::box;
  Vec3 center;
  Vec3 half;      // box half extents / ellipsoid radii / (radius, radius, half height)
  double round = 0.0;  // boxes only

  double sdf(const Vec3& p) const;
  bool inside(const Vec3& p) const;  // strict interior, exact sign
  double surface_area() const;
  // Uniform-ish point on the primitive surface.
  Vec3 sample_surface(Rng& rng) const;
};

// Union of primitives; the shape every family compiles down to.
struct SdfShape {
  std::vector<Primitive> primitives;

  double sdf(const Vec3& p) const;
  Vec3 sdf_gradient(const Vec3& p, double h = 1e-4) const;
  bool inside_any_except(const Vec3& p, std::size_t skip) const;

  // Area-weighted surface samples of the union: points sampled per primitive
  // and rejected when buried inside another primitive.
  PointCloud sample_surface(std::size_t n, std::uint64_t seed) const;

  // Similarity transform applied in place (translate then uniform scale).
  void transform(const Vec3& translate, double scale);
};

}  // namespace pointgen::synth
