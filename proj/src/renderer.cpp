#include "pointgen/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "pointgen/error.hpp"
#include "pointgen/hash.hpp"
#include "pointgen/rng.hpp"

namespace pointgen::synth {

Background background_from_name(const std::string& name) {
  if (name == "clean") return Background::clean;
  if (name == "cluttered") return Background::cluttered;
  throw ConfigError("unknown background mode: " + name);
}

std::string background_name(Background bg) {
  return bg == Background::clean ? "clean" : "cluttered";
}

std::vector<Viewpoint> canonical_views() {
  std::vector<Viewpoint> views;
  for (int i = 0; i < 8; ++i)
    views.push_back({45.0 * i, 30.0});
  return views;
}

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kWindow = 0.95;      // orthographic half-width
constexpr double kCameraDist = 2.5;   // outside the unit-cube bounding sphere
constexpr double kHitEps = 1e-4;
constexpr double kMaxT = 5.0;
constexpr int kMaxSteps = 192;

struct CameraBasis {
  Vec3 right, up, forward, eye;
};

CameraBasis make_camera(const Viewpoint& view) {
  const double az = view.azimuth_deg * kPi / 180.0;
  const double el = view.elevation_deg * kPi / 180.0;
  const Vec3 dir{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                 std::sin(el)};
  CameraBasis cam;
  cam.eye = dir * kCameraDist;
  cam.forward = dir * -1.0;
  // World up is +z; elevations stay well below 90 degrees.
  const Vec3 up_world{0, 0, 1};
  Vec3 right{cam.forward.y * up_world.z - cam.forward.z * up_world.y,
             cam.forward.z * up_world.x - cam.forward.x * up_world.z,
             cam.forward.x * up_world.y - cam.forward.y * up_world.x};
  const double rn = right.norm();
  cam.right = right * (1.0 / rn);
  cam.up = {cam.right.y * cam.forward.z - cam.right.z * cam.forward.y,
            cam.right.z * cam.forward.x - cam.right.x * cam.forward.z,
            cam.right.x * cam.forward.y - cam.right.y * cam.forward.x};
  return cam;
}

// Lattice value noise, bilinear, deterministic in (seed, octave).
double value_noise(double x, double y, std::uint64_t seed, int octave) {
  const auto lattice = [&](int ix, int iy) {
    std::uint64_t h = fnv1a_u64(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL);
    h = fnv1a_u64(static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4FULL, h);
    h = fnv1a_u64(seed + static_cast<std::uint64_t>(octave) * 0x165667B19E3779F9ULL, h);
    return static_cast<double>(h % 4096) / 4095.0;
  };
  const int ix = static_cast<int>(std::floor(x));
  const int iy = static_cast<int>(std::floor(y));
  const double fx = x - ix, fy = y - iy;
  const double sx = fx * fx * (3 - 2 * fx);
  const double sy = fy * fy * (3 - 2 * fy);
  const double a = lattice(ix, iy), b = lattice(ix + 1, iy);
  const double c = lattice(ix, iy + 1), d = lattice(ix + 1, iy + 1);
  return (a * (1 - sx) + b * sx) * (1 - sy) + (c * (1 - sx) + d * sx) * sy;
}

struct Patch {
  bool circle = false;
  double cx = 0, cy = 0, r = 0, w = 0, h = 0, angle = 0;
  Vec3 color;
};

void fill_background(Image& img, Background bg, std::uint64_t seed) {
  const int size = img.width;
  if (bg == Background::clean) {
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        std::uint8_t* p = img.pixel(x, y);
        p[0] = kCleanBackground[0];
        p[1] = kCleanBackground[1];
        p[2] = kCleanBackground[2];
      }
    return;
  }
  Rng rng(mix_seed(seed, "background"));
  // Base hue ramp plus three octaves of value noise.
  const double hue_r = rng.uniform(0.3, 0.9);
  const double hue_g = rng.uniform(0.3, 0.9);
  const double hue_b = rng.uniform(0.3, 0.9);
  const std::uint64_t noise_seed = rng.raw();
  const int n_patches = 6 + static_cast<int>(rng.uniform_int(7));
  std::vector<Patch> patches;
  for (int i = 0; i < n_patches; ++i) {
    Patch pa;
    pa.circle = rng.uniform01() < 0.5;
    pa.cx = rng.uniform(0.0, size);
    pa.cy = rng.uniform(0.0, size);
    pa.r = rng.uniform(0.05, 0.22) * size;
    pa.w = rng.uniform(0.08, 0.3) * size;
    pa.h = rng.uniform(0.05, 0.2) * size;
    pa.angle = rng.uniform(0.0, kPi);
    pa.color = {rng.uniform(0.15, 0.95), rng.uniform(0.15, 0.95),
                rng.uniform(0.15, 0.95)};
    patches.push_back(pa);
  }
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double fx = static_cast<double>(x) / size;
      const double fy = static_cast<double>(y) / size;
      double n = 0.55 * value_noise(fx * 5, fy * 5, noise_seed, 0) +
                 0.3 * value_noise(fx * 13, fy * 13, noise_seed, 1) +
                 0.15 * value_noise(fx * 29, fy * 29, noise_seed, 2);
      Vec3 c{hue_r * (0.5 + 0.6 * n), hue_g * (0.5 + 0.6 * n),
             hue_b * (0.5 + 0.6 * n)};
      for (const auto& pa : patches) {
        const double dx = x - pa.cx, dy = y - pa.cy;
        bool in;
        if (pa.circle) {
          in = dx * dx + dy * dy < pa.r * pa.r;
        } else {
          const double rx = dx * std::cos(pa.angle) + dy * std::sin(pa.angle);
          const double ry = -dx * std::sin(pa.angle) + dy * std::cos(pa.angle);
          in = std::abs(rx) < pa.w / 2 && std::abs(ry) < pa.h / 2;
        }
        if (in) c = pa.color * 0.75 + c * 0.25;
      }
      std::uint8_t* p = img.pixel(x, y);
      p[0] = static_cast<std::uint8_t>(std::clamp(c.x, 0.0, 1.0) * 255.0 + 0.5);
      p[1] = static_cast<std::uint8_t>(std::clamp(c.y, 0.0, 1.0) * 255.0 + 0.5);
      p[2] = static_cast<std::uint8_t>(std::clamp(c.z, 0.0, 1.0) * 255.0 + 0.5);
    }
}

}  // namespace

RenderResult render_shape(const SdfShape& shape, const RenderOptions& opts) {
  if (shape.primitives.empty()) throw ConfigError("render_shape: empty shape");
  if (opts.size < 8) throw ConfigError("render_shape: image size too small");
  const int size = opts.size;
  RenderResult out;
  out.image = Image(size, size);
  out.mask.assign(static_cast<std::size_t>(size) * size, 0);
  fill_background(out.image, opts.background, opts.seed);

  const CameraBasis cam = make_camera(opts.view);
  // Key light anchored to the camera frame, slightly right and above.
  Vec3 light = cam.forward * -0.55 + cam.right * 0.35 + cam.up * 0.75;
  light = light * (1.0 / light.norm());

  for (int py = 0; py < size; ++py) {
    for (int px = 0; px < size; ++px) {
      const double u = ((px + 0.5) / size * 2.0 - 1.0) * kWindow;
      const double v = (1.0 - (py + 0.5) / size * 2.0) * kWindow;
      const Vec3 origin = cam.eye + cam.right * u + cam.up * v;
      double t = 0.0;
      bool hit = false;
      Vec3 hp;
      for (int step = 0; step < kMaxSteps && t < kMaxT; ++step) {
        hp = origin + cam.forward * t;
        const double d = shape.sdf(hp);
        if (d < kHitEps) {
          hit = true;
          break;
        }
        t += std::max(d * 0.9, 5e-4);
      }
      if (!hit) continue;
      out.mask[static_cast<std::size_t>(py) * size + px] = 1;
      Vec3 n = shape.sdf_gradient(hp);
      const double nn = n.norm();
      if (nn > 1e-12) n = n * (1.0 / nn);
      const double lambert = std::max(0.0, n.dot(light));
      const double rim = std::max(0.0, n.dot(cam.forward * -1.0));
      const double shade = 0.3 + 0.6 * lambert + 0.1 * rim;
      std::uint8_t* p = out.image.pixel(px, py);
      p[0] = static_cast<std::uint8_t>(std::clamp(opts.albedo.x * shade, 0.0, 1.0) * 255.0 + 0.5);
      p[1] = static_cast<std::uint8_t>(std::clamp(opts.albedo.y * shade, 0.0, 1.0) * 255.0 + 0.5);
      p[2] = static_cast<std::uint8_t>(std::clamp(opts.albedo.z * shade, 0.0, 1.0) * 255.0 + 0.5);
    }
  }
  return out;
}

}  // namespace pointgen::synth
