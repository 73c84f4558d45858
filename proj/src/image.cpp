#include "pointgen/image.hpp"

#include <cstdio>
#include <fstream>

#include "pointgen/error.hpp"

namespace pointgen {

void save_ppm(const std::string& path, const Image& img) {
  if (img.width <= 0 || img.height <= 0) throw ConfigError("save_ppm: empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
  if (!out) throw IoError("write failed: " + path);
}

Image load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::string magic;
  in >> magic;
  if (magic != "P6") throw IoError("not a P6 ppm: " + path);
  auto next_token = [&]() {
    // Skips whitespace and '#' comment lines.
    int tok;
    for (;;) {
      in >> std::ws;
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      if (!(in >> tok)) throw IoError("bad ppm header: " + path);
      return tok;
    }
  };
  const int w = next_token();
  const int h = next_token();
  const int maxval = next_token();
  if (w <= 0 || h <= 0 || maxval != 255) throw IoError("unsupported ppm: " + path);
  in.get();  // single whitespace after maxval
  Image img(w, h);
  in.read(reinterpret_cast<char*>(img.rgb.data()),
          static_cast<std::streamsize>(img.rgb.size()));
  if (!in) throw IoError("truncated ppm: " + path);
  return img;
}

Tensor image_to_tensor(const Image& img) {
  Tensor t({3, img.height, img.width});
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* p = img.pixel(x, y);
      for (int c = 0; c < 3; ++c)
        t.at3(c, y, x) = static_cast<double>(p[c]) / 255.0;
    }
  return t;
}

Image downsample(const Image& img, int factor) {
  if (factor < 1 || img.width % factor != 0 || img.height % factor != 0)
    throw ConfigError("downsample: size not divisible by factor");
  if (factor == 1) return img;
  Image out(img.width / factor, img.height / factor);
  const int f2 = factor * factor;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      int acc[3] = {0, 0, 0};
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx) {
          const std::uint8_t* p = img.pixel(x * factor + dx, y * factor + dy);
          for (int c = 0; c < 3; ++c) acc[c] += p[c];
        }
      std::uint8_t* q = out.pixel(x, y);
      for (int c = 0; c < 3; ++c)
        q[c] = static_cast<std::uint8_t>((acc[c] + f2 / 2) / f2);
    }
  return out;
}

Tensor image_to_input(const Image& img, int size) {
  if (img.width != img.height) throw ConfigError("image_to_input: non-square image");
  if (img.width % size != 0)
    throw ConfigError("image_to_input: image size not divisible by target");
  return image_to_tensor(downsample(img, img.width / size));
}

}  // namespace pointgen
