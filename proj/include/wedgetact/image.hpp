#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wedgetact/geometry.hpp"

namespace wedgetact {

/// 8-bit RGB raster, row-major.
struct SensorImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  SensorImage() = default;
  SensorImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h * 3, 0) {}

  std::uint8_t& at(int x, int y, int c) { return pixels[(std::size_t(y) * width + x) * 3 + c]; }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(std::size_t(y) * width + x) * 3 + c];
  }
  bool same_size(const SensorImage& o) const { return width == o.width && height == o.height; }
  bool operator==(const SensorImage&) const = default;
};

/// Boolean raster matching a SensorImage.
struct ContactMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1

  ContactMask() = default;
  ContactMask(int w, int h) : width(w), height(h), bits(std::size_t(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return bits[std::size_t(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return bits[std::size_t(y) * width + x]; }
  std::size_t count() const;
  bool operator==(const ContactMask&) const = default;
};

enum class Channel { Gray, R, G, B };

/// Mean and population standard deviation over all pixels. Gray is the
/// per-pixel mean of the three channels, taken before the statistics.
std::pair<double, double> mean_std(const SensorImage& img, Channel channel);

struct Component {
  std::size_t pixel_count = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

/// Labels connected regions of true pixels (connectivity 4 or 8). Components
/// come back sorted by pixel count descending, ties broken by bounding-box
/// top-left (y, then x).
std::vector<Component> connected_components(const ContactMask& mask, int connectivity);

/// Per-destination-pixel source lookup. Coordinates < 0 mark invalid pixels.
struct RectifyMap {
  int width = 0;
  int height = 0;
  std::vector<float> src_x;
  std::vector<float> src_y;

  RectifyMap() = default;
  RectifyMap(int w, int h)
      : width(w), height(h), src_x(std::size_t(w) * h, -1.f), src_y(std::size_t(w) * h, -1.f) {}

  static RectifyMap identity(int w, int h);
  void save(const std::string& path) const;
  static RectifyMap load(const std::string& path);
};

/// Bilinear resampling of `img` at the map's source coordinates; invalid or
/// out-of-bounds sources produce black. OpenMP over rows.
SensorImage remap(const SensorImage& img, const RectifyMap& map);
/// Serial reference for remap; identical output.
SensorImage remap_serial(const SensorImage& img, const RectifyMap& map);

/// Axis-aligned crop around the mask's bounding box, expanded by `padding`
/// and clipped to the image. Throws std::invalid_argument on an empty mask.
SensorImage crop_around(const SensorImage& img, const ContactMask& mask, int padding);

}  // namespace wedgetact
