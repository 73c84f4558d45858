#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <set>

#include "pointgen/error.hpp"
#include "pointgen/geometry.hpp"
#include "pointgen/hash.hpp"
#include "pointgen/image.hpp"
#include "pointgen/renderer.hpp"
#include "pointgen/rng.hpp"
#include "pointgen/synth_shapes.hpp"

using namespace pointgen;
using namespace pointgen::synth;

TEST_CASE("make_shape is deterministic") {
  Rng rng(100);
  for (ShapeFamily f : all_families()) {
    const ShapeSpec spec = random_spec(f, rng);
    const SynthShape a = make_shape(spec);
    const SynthShape b = make_shape(spec);
    REQUIRE(a.surface_samples.points.size() == kSurfaceSamples);
    for (std::size_t i = 0; i < a.surface_samples.points.size(); ++i) {
      CHECK(a.surface_samples.points[i].x == b.surface_samples.points[i].x);
      CHECK(a.surface_samples.points[i].y == b.surface_samples.points[i].y);
      CHECK(a.surface_samples.points[i].z == b.surface_samples.points[i].z);
    }
  }
}

TEST_CASE("every family instance satisfies the normalized invariants") {
  Rng rng(200);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    for (ShapeFamily f : all_families()) {
      const SynthShape shape = make_shape(random_spec(f, rng));
      const PointCloud& pc = shape.surface_samples;
      CHECK(pc.frame_tag == FrameTag::normalized);
      CHECK(pc.all_finite());
      CHECK(pc.centroid().norm() < 1e-6);
      CHECK(pc.max_half_extent({0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-6));
      ++checked;
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("surface samples lie on the analytic surface") {
  Rng rng(300);
  for (ShapeFamily f : all_families()) {
    const SynthShape shape = make_shape(random_spec(f, rng));
    // After the similarity transform the samples must still track the solid;
    // the ellipsoid distance is approximate, so allow a small band.
    double worst = 0.0;
    for (std::size_t i = 0; i < shape.surface_samples.points.size(); i += 16)
      worst = std::max(worst,
                       std::abs(shape.sdf.sdf(shape.surface_samples.points[i])));
    CHECK(worst < 0.02);
  }
}

TEST_CASE("make_shape rejects out-of-range params") {
  Rng rng(400);
  ShapeSpec spec = random_spec(ShapeFamily::legged, rng);
  spec.params[0] = 99.0;
  CHECK_THROWS_AS(make_shape(spec), ConfigError);
  spec.params.pop_back();
  CHECK_THROWS_AS(make_shape(spec), ConfigError);
}

TEST_CASE("renders are deterministic per seed") {
  Rng rng(500);
  const SynthShape shape = make_shape(random_spec(ShapeFamily::ellipsoid_union, rng));
  RenderOptions opts;
  opts.background = Background::cluttered;
  opts.seed = 77;
  opts.view = {100.0, 30.0};
  const RenderResult a = render_shape(shape.sdf, opts);
  const RenderResult b = render_shape(shape.sdf, opts);
  CHECK(a.image.rgb == b.image.rgb);
  CHECK(a.mask == b.mask);
  // A different seed must change a cluttered background.
  opts.seed = 78;
  const RenderResult c = render_shape(shape.sdf, opts);
  CHECK(a.image.rgb != c.image.rgb);
  CHECK(a.mask == c.mask);  // the silhouette does not depend on the background
}

TEST_CASE("clean background pixels all equal the uniform color") {
  Rng rng(600);
  const SynthShape shape = make_shape(random_spec(ShapeFamily::legged, rng));
  RenderOptions opts;
  opts.background = Background::clean;
  const RenderResult r = render_shape(shape.sdf, opts);
  int object_pixels = 0;
  for (int y = 0; y < opts.size; ++y)
    for (int x = 0; x < opts.size; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * opts.size + x;
      const std::uint8_t* p = r.image.pixel(x, y);
      if (r.mask[i]) {
        ++object_pixels;
      } else {
        CHECK(p[0] == kCleanBackground[0]);
        CHECK(p[1] == kCleanBackground[1]);
        CHECK(p[2] == kCleanBackground[2]);
      }
    }
  CHECK(object_pixels > 100);
}

TEST_CASE("a sphere has identical silhouette masks across all azimuths") {
  SdfShape sphere;
  Primitive p;
  p.kind = PrimitiveKind::ellipsoid;
  p.half = {0.42, 0.42, 0.42};
  sphere.primitives.push_back(p);

  std::vector<std::uint8_t> first_mask;
  for (const Viewpoint& view : canonical_views()) {
    RenderOptions opts;
    opts.view = view;
    const RenderResult r = render_shape(sphere, opts);
    if (first_mask.empty())
      first_mask = r.mask;
    else
      CHECK(r.mask == first_mask);
  }
  std::size_t covered = 0;
  for (auto m : first_mask) covered += m;
  CHECK(covered > 500);
}

TEST_CASE("ppm round-trip is byte exact") {
  Rng rng(700);
  const SynthShape shape = make_shape(random_spec(ShapeFamily::winged, rng));
  RenderOptions opts;
  opts.background = Background::cluttered;
  opts.seed = 3;
  const RenderResult r = render_shape(shape.sdf, opts);

  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "pointgen_render_test";
  fs::create_directories(dir);
  const std::string p1 = (dir / "a.ppm").string();
  const std::string p2 = (dir / "b.ppm").string();
  save_ppm(p1, r.image);
  const Image loaded = load_ppm(p1);
  save_ppm(p2, loaded);
  CHECK(file_digest(p1) == file_digest(p2));
  CHECK(loaded.rgb == r.image.rgb);
  fs::remove_all(dir);
}

TEST_CASE("downsample averages blocks") {
  Image img(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      std::uint8_t* p = img.pixel(x, y);
      p[0] = static_cast<std::uint8_t>(x < 2 && y < 2 ? 100 : 20);
      p[1] = 40;
      p[2] = 60;
    }
  const Image out = downsample(img, 2);
  CHECK(out.width == 2);
  CHECK(out.pixel(0, 0)[0] == 100);
  CHECK(out.pixel(1, 1)[0] == 20);
  CHECK(out.pixel(0, 0)[1] == 40);
}
