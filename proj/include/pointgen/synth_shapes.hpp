#pragma once

#include <string>
#include <vector>

#include "pointgen/point_cloud.hpp"
#include "pointgen/rng.hpp"
#include "pointgen/sdf_shape.hpp"

namespace pointgen::synth {

// Five procedural families with structural variety: slabs with arms, a winged
// fuselage, a thin-legged seat, an ellipsoid body with wheels, and a tall-back
// chair. Category labels follow the common furniture/vehicle names.
enum class ShapeFamily {
  rounded_slab,     // sofa
  winged,           // airplane
  box_frame,        // bench
  ellipsoid_union,  // car
  legged,           // chair
};

const std::vector<ShapeFamily>& all_families();
std::string family_name(ShapeFamily f);
std::string family_category(ShapeFamily f);
ShapeFamily family_from_name(const std::string& name);

struct ParamRange {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

// Documented parameter ranges, in canonical order, for one family.
const std::vector<ParamRange>& family_params(ShapeFamily f);

struct ShapeSpec {
  ShapeFamily family = ShapeFamily::rounded_slab;
  std::vector<double> params;
  std::uint64_t seed = 0;  // drives surface sampling only
};

// Geometry in the normalized frame: the analytic solid and its stored
// surface samples share one similarity transform.
struct SynthShape {
  ShapeSpec spec;
  std::string category;
  SdfShape sdf;
  PointCloud surface_samples;  // 4096 points, frame_tag = normalized
};

constexpr std::size_t kSurfaceSamples = 4096;

// Deterministic: the same spec always yields the same geometry.
SynthShape make_shape(const ShapeSpec& spec);

// Uniform parameter draw within the documented ranges.
ShapeSpec random_spec(ShapeFamily family, Rng& rng);

Vec3 albedo_from_seed(std::uint64_t seed);

}  // namespace pointgen::synth
