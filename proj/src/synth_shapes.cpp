#include "pointgen/synth_shapes.hpp"

#include <cmath>

#include "pointgen/error.hpp"
#include "pointgen/geometry.hpp"
#include "pointgen/hash.hpp"

namespace pointgen::synth {

const std::vector<ShapeFamily>& all_families() {
  static const std::vector<ShapeFamily> families = {
      ShapeFamily::rounded_slab, ShapeFamily::winged, ShapeFamily::box_frame,
      ShapeFamily::ellipsoid_union, ShapeFamily::legged};
  return families;
}

std::string family_name(ShapeFamily f) {
  switch (f) {
    case ShapeFamily::rounded_slab: return "rounded-slab";
    case ShapeFamily::winged: return "winged";
    case ShapeFamily::box_frame: return "box-frame";
    case ShapeFamily::ellipsoid_union: return "ellipsoid-union";
    case ShapeFamily::legged: return "legged";
  }
  return "?";
}

std::string family_category(ShapeFamily f) {
  switch (f) {
    case ShapeFamily::rounded_slab: return "sofa";
    case ShapeFamily::winged: return "airplane";
    case ShapeFamily::box_frame: return "bench";
    case ShapeFamily::ellipsoid_union: return "car";
    case ShapeFamily::legged: return "chair";
  }
  return "?";
}

ShapeFamily family_from_name(const std::string& name) {
  for (ShapeFamily f : all_families())
    if (family_name(f) == name || family_category(f) == name) return f;
  throw ConfigError("unknown shape family: " + name);
}

const std::vector<ParamRange>& family_params(ShapeFamily f) {
  static const std::vector<ParamRange> sofa = {
      {"width", 1.4, 2.2},       {"depth", 0.7, 1.0},
      {"seat_height", 0.35, 0.5}, {"back_height", 0.5, 0.9},
      {"arm_width", 0.12, 0.25}, {"arm_height", 0.15, 0.35},
      {"round", 0.0, 0.04},
  };
  static const std::vector<ParamRange> airplane = {
      {"length", 1.8, 2.4},      {"fuselage_radius", 0.12, 0.22},
      {"wing_span", 1.4, 2.2},   {"wing_chord", 0.3, 0.5},
      {"wing_pos", -0.25, 0.1},  {"tail_span", 0.5, 0.8},
      {"fin_height", 0.3, 0.5},
  };
  static const std::vector<ParamRange> bench = {
      {"width", 1.6, 2.4},       {"depth", 0.36, 0.6},
      {"leg_height", 0.3, 0.45}, {"seat_thickness", 0.05, 0.09},
      {"leg_width", 0.05, 0.1},  {"back_height", 0.0, 0.45},
  };
  static const std::vector<ParamRange> car = {
      {"length", 1.8, 2.4},      {"width", 0.7, 1.0},
      {"body_height", 0.36, 0.56}, {"cabin_length", 0.45, 0.65},
      {"cabin_height", 0.28, 0.44}, {"cabin_pos", -0.15, 0.1},
      {"wheel_radius", 0.12, 0.18},
  };
  static const std::vector<ParamRange> chair = {
      {"seat_size", 0.5, 0.7},   {"leg_height", 0.4, 0.55},
      {"seat_thickness", 0.04, 0.07}, {"leg_radius", 0.02, 0.04},
      {"back_height", 0.45, 0.7},
  };
  switch (f) {
    case ShapeFamily::rounded_slab: return sofa;
    case ShapeFamily::winged: return airplane;
    case ShapeFamily::box_frame: return bench;
    case ShapeFamily::ellipsoid_union: return car;
    case ShapeFamily::legged: return chair;
  }
  return sofa;
}

namespace {

Primitive box(Vec3 center, Vec3 half, double round = 0.0) {
  Primitive p;
  p.kind = PrimitiveKind::box;
  p.center = center;
  p.half = half;
  p.round = round;
  return p;
}

Primitive ellipsoid(Vec3 center, Vec3 radii) {
  Primitive p;
  p.kind = PrimitiveKind::ellipsoid;
  p.center = center;
  p.half = radii;
  return p;
}

Primitive cylinder_z(Vec3 center, double radius, double half_h) {
  Primitive p;
  p.kind = PrimitiveKind::cylinder_z;
  p.center = center;
  p.half = {radius, radius, half_h};
  return p;
}

SdfShape build_sofa(const std::vector<double>& v) {
  const double w = v[0], d = v[1], hs = v[2], hb = v[3], aw = v[4], ah = v[5],
               r = v[6];
  const double t = 0.18 * d;  // back slab thickness
  SdfShape s;
  s.primitives.push_back(box({0, 0, hs / 2}, {w / 2, d / 2, hs / 2}, r));
  s.primitives.push_back(
      box({0, -d / 2 + t / 2, hs + hb / 2}, {w / 2, t / 2, hb / 2}, r));
  s.primitives.push_back(
      box({-(w / 2 - aw / 2), 0, hs + ah / 2}, {aw / 2, d / 2, ah / 2}, r));
  s.primitives.push_back(
      box({w / 2 - aw / 2, 0, hs + ah / 2}, {aw / 2, d / 2, ah / 2}, r));
  return s;
}

SdfShape build_airplane(const std::vector<double>& v) {
  const double len = v[0], rf = v[1], span = v[2], chord = v[3], wpos = v[4],
               tspan = v[5], fin = v[6];
  SdfShape s;
  s.primitives.push_back(ellipsoid({0, 0, 0}, {len / 2, rf, rf}));
  s.primitives.push_back(box({wpos, 0, 0}, {chord / 2, span / 2, 0.025}));
  const double tail_x = len / 2 - 0.14;
  s.primitives.push_back(box({tail_x, 0, 0.02}, {0.1, tspan / 2, 0.02}));
  s.primitives.push_back(box({tail_x, 0, fin / 2}, {0.1, 0.02, fin / 2}));
  return s;
}

SdfShape build_bench(const std::vector<double>& v) {
  const double w = v[0], d = v[1], hl = v[2], t = v[3], lw = v[4], hb = v[5];
  SdfShape s;
  s.primitives.push_back(box({0, 0, hl + t / 2}, {w / 2, d / 2, t / 2}));
  const double lx = w / 2 - lw;
  const double ly = std::max(d / 2 - lw, lw);
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0})
      s.primitives.push_back(
          box({sx * lx, sy * ly, hl / 2}, {lw / 2, lw / 2, hl / 2}));
  if (hb >= 0.15) {
    const double bt = 0.6 * t;
    s.primitives.push_back(
        box({0, -d / 2 + bt, hl + t + hb / 2}, {w / 2, bt, hb / 2}));
  }
  return s;
}

SdfShape build_car(const std::vector<double>& v) {
  const double len = v[0], w = v[1], bh = v[2], cl = v[3], ch = v[4],
               cpos = v[5], rw = v[6];
  SdfShape s;
  const double body_z = rw + bh / 2;
  s.primitives.push_back(ellipsoid({0, 0, body_z}, {len / 2, w / 2, bh / 2}));
  s.primitives.push_back(ellipsoid(
      {cpos * len, 0, body_z + bh / 2}, {cl * len / 2, 0.8 * w / 2, ch / 2}));
  const double ax = 0.62 * len / 2;
  const double wheel_w = 0.1 * w;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0})
      s.primitives.push_back(
          ellipsoid({sx * ax, sy * w / 2, rw}, {rw, wheel_w, rw}));
  return s;
}

SdfShape build_chair(const std::vector<double>& v) {
  const double ss = v[0], hl = v[1], t = v[2], lr = v[3], hb = v[4];
  SdfShape s;
  s.primitives.push_back(box({0, 0, hl + t / 2}, {ss / 2, ss / 2, t / 2}));
  const double lx = ss / 2 - 1.5 * lr;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0})
      s.primitives.push_back(cylinder_z({sx * lx, sy * lx, hl / 2}, lr, hl / 2));
  const double bt = 0.55 * t;
  s.primitives.push_back(
      box({0, -ss / 2 + bt, hl + t + hb / 2}, {ss / 2, bt, hb / 2}));
  return s;
}

}  // namespace

SynthShape make_shape(const ShapeSpec& spec) {
  const auto& ranges = family_params(spec.family);
  if (spec.params.size() != ranges.size())
    throw ConfigError("make_shape: expected " + std::to_string(ranges.size()) +
                      " params for family " + family_name(spec.family));
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const double p = spec.params[i];
    if (!(p >= ranges[i].lo && p <= ranges[i].hi))
      throw ConfigError("make_shape: param '" + ranges[i].name +
                        "' out of range [" + std::to_string(ranges[i].lo) +
                        ", " + std::to_string(ranges[i].hi) + "]");
  }
  SynthShape shape;
  shape.spec = spec;
  shape.category = family_category(spec.family);
  switch (spec.family) {
    case ShapeFamily::rounded_slab: shape.sdf = build_sofa(spec.params); break;
    case ShapeFamily::winged: shape.sdf = build_airplane(spec.params); break;
    case ShapeFamily::box_frame: shape.sdf = build_bench(spec.params); break;
    case ShapeFamily::ellipsoid_union: shape.sdf = build_car(spec.params); break;
    case ShapeFamily::legged: shape.sdf = build_chair(spec.params); break;
  }
  const PointCloud raw =
      shape.sdf.sample_surface(kSurfaceSamples, mix_seed(spec.seed, "surface"));
  shape.surface_samples = geometry::normalize(raw);
  // Move the analytic solid into the same normalized frame.
  const Vec3 c = raw.centroid();
  const double extent = raw.max_half_extent(c);
  shape.sdf.transform({-c.x, -c.y, -c.z}, 0.5 / extent);
  return shape;
}

ShapeSpec random_spec(ShapeFamily family, Rng& rng) {
  ShapeSpec spec;
  spec.family = family;
  for (const auto& r : family_params(family))
    spec.params.push_back(rng.uniform(r.lo, r.hi));
  spec.seed = rng.raw();
  return spec;
}

Vec3 albedo_from_seed(std::uint64_t seed) {
  const std::uint64_t h = fnv1a_u64(seed);
  const double hue = static_cast<double>(h % 360);
  const double sat = 0.45 + 0.3 * static_cast<double>((h >> 16) % 100) / 100.0;
  const double val = 0.55 + 0.3 * static_cast<double>((h >> 32) % 100) / 100.0;
  // HSV to RGB.
  const double c = val * sat;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = val - c;
  return {r + m, g + m, b + m};
}

}  // namespace pointgen::synth
