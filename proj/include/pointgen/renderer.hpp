#pragma once

#include <cstdint>
#include <vector>

#include "pointgen/image.hpp"
#include "pointgen/sdf_shape.hpp"

namespace pointgen::synth {

enum class Background { clean, cluttered };

Background background_from_name(const std::string& name);
std::string background_name(Background bg);

struct Viewpoint {
  double azimuth_deg = 30.0;
  double elevation_deg = 30.0;
};

// Eight azimuths, 45 degrees apart, at a fixed 30 degree elevation.
std::vector<Viewpoint> canonical_views();

struct RenderOptions {
  int size = 128;
  Background background = Background::clean;
  std::uint64_t seed = 0;  // drives the cluttered background only
  Viewpoint view;
  Vec3 albedo{0.7, 0.45, 0.35};
};

struct RenderResult {
  Image image;
  std::vector<std::uint8_t> mask;  // 1 where the object covers the pixel
};

// Orthographic raycast of the solid; deterministic for fixed options.
RenderResult render_shape(const SdfShape& shape, const RenderOptions& opts);

// Uniform background color used in clean mode.
inline constexpr std::uint8_t kCleanBackground[3] = {205, 208, 212};

}  // namespace pointgen::synth
