#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pointgen/tensor.hpp"

namespace pointgen {

// 8-bit RGB raster, row-major, interleaved channels.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* pixel(int x, int y) {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* pixel(int x, int y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

// Binary PPM (P6), maxval 255.
void save_ppm(const std::string& path, const Image& img);
Image load_ppm(const std::string& path);

// (3, H, W) tensor with values in [0, 1].
Tensor image_to_tensor(const Image& img);

// Box-filter downsampling by an integer factor.
Image downsample(const Image& img, int factor);

// Converts to (3, size, size); requires img dimensions to be an integer
// multiple of size.
Tensor image_to_input(const Image& img, int size);

}  // namespace pointgen
