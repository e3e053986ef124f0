#include "wedgetact/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace wedgetact {

std::size_t ContactMask::count() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits) n += (b != 0);
  return n;
}

std::pair<double, double> mean_std(const SensorImage& img, Channel channel) {
  const std::size_t n = std::size_t(img.width) * img.height;
  if (n == 0) return {0.0, 0.0};
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = &img.pixels[i * 3];
    double v;
    switch (channel) {
      case Channel::R: v = p[0]; break;
      case Channel::G: v = p[1]; break;
      case Channel::B: v = p[2]; break;
      default: v = (double(p[0]) + p[1] + p[2]) / 3.0; break;
    }
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / double(n);
  const double var = std::max(0.0, sum2 / double(n) - mean * mean);
  return {mean, std::sqrt(var)};
}

std::vector<Component> connected_components(const ContactMask& mask, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw std::invalid_argument("connected_components: connectivity must be 4 or 8");
  }
  const int w = mask.width, h = mask.height;
  std::vector<int> label(std::size_t(w) * h, -1);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;

  static const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int ndirs = (connectivity == 4) ? 4 : 8;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = std::size_t(y) * w + x;
      if (!mask.bits[idx] || label[idx] >= 0) continue;
      const int id = int(comps.size());
      Component c;
      c.min_x = c.max_x = x;
      c.min_y = c.max_y = y;
      double sx = 0, sy = 0;
      stack.clear();
      stack.emplace_back(x, y);
      label[idx] = id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++c.pixel_count;
        sx += cx;
        sy += cy;
        c.min_x = std::min(c.min_x, cx);
        c.max_x = std::max(c.max_x, cx);
        c.min_y = std::min(c.min_y, cy);
        c.max_y = std::max(c.max_y, cy);
        for (int d = 0; d < ndirs; ++d) {
          const int nx = cx + dx8[d], ny = cy + dy8[d];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t nidx = std::size_t(ny) * w + nx;
          if (!mask.bits[nidx] || label[nidx] >= 0) continue;
          label[nidx] = id;
          stack.emplace_back(nx, ny);
        }
      }
      c.centroid_x = sx / double(c.pixel_count);
      c.centroid_y = sy / double(c.pixel_count);
      comps.push_back(c);
    }
  }
  std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    if (a.pixel_count != b.pixel_count) return a.pixel_count > b.pixel_count;
    if (a.min_y != b.min_y) return a.min_y < b.min_y;
    return a.min_x < b.min_x;
  });
  return comps;
}

RectifyMap RectifyMap::identity(int w, int h) {
  RectifyMap map(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      map.src_x[std::size_t(y) * w + x] = float(x);
      map.src_y[std::size_t(y) * w + x] = float(y);
    }
  }
  return map;
}

namespace {
constexpr char kMapMagic[4] = {'R', 'M', 'A', 'P'};
constexpr std::uint32_t kMapVersion = 1;
}  // namespace

void RectifyMap::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("RectifyMap::save: cannot open " + path);
  out.write(kMapMagic, 4);
  const std::uint32_t ver = kMapVersion;
  const std::uint32_t w = width, h = height;
  out.write(reinterpret_cast<const char*>(&ver), 4);
  out.write(reinterpret_cast<const char*>(&w), 4);
  out.write(reinterpret_cast<const char*>(&h), 4);
  out.write(reinterpret_cast<const char*>(src_x.data()), std::streamsize(src_x.size() * 4));
  out.write(reinterpret_cast<const char*>(src_y.data()), std::streamsize(src_y.size() * 4));
  if (!out) throw std::runtime_error("RectifyMap::save: write failed for " + path);
}

RectifyMap RectifyMap::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("RectifyMap::load: cannot open " + path);
  char magic[4];
  std::uint32_t ver = 0, w = 0, h = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&ver), 4);
  in.read(reinterpret_cast<char*>(&w), 4);
  in.read(reinterpret_cast<char*>(&h), 4);
  if (!in || std::memcmp(magic, kMapMagic, 4) != 0) {
    throw std::runtime_error("RectifyMap::load: not a rectify map: " + path);
  }
  if (ver != kMapVersion) {
    throw std::runtime_error("RectifyMap::load: unsupported version " + std::to_string(ver));
  }
  RectifyMap map(int(w), int(h));
  in.read(reinterpret_cast<char*>(map.src_x.data()), std::streamsize(map.src_x.size() * 4));
  in.read(reinterpret_cast<char*>(map.src_y.data()), std::streamsize(map.src_y.size() * 4));
  if (!in) throw std::runtime_error("RectifyMap::load: truncated file: " + path);
  return map;
}

namespace {

inline void remap_row(const SensorImage& img, const RectifyMap& map, SensorImage& out, int y) {
  for (int x = 0; x < map.width; ++x) {
    const std::size_t i = std::size_t(y) * map.width + x;
    const float sx = map.src_x[i], sy = map.src_y[i];
    std::uint8_t* dst = &out.pixels[i * 3];
    if (sx < 0.f || sy < 0.f || sx > float(img.width - 1) || sy > float(img.height - 1)) {
      dst[0] = dst[1] = dst[2] = 0;
      continue;
    }
    const int x0 = std::min(int(sx), img.width - 1);
    const int y0 = std::min(int(sy), img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = sx - x0, fy = sy - y0;
    for (int c = 0; c < 3; ++c) {
      const double v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
      const double v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
      const double v = (v00 * (1 - fx) + v10 * fx) * (1 - fy) + (v01 * (1 - fx) + v11 * fx) * fy;
      dst[c] = std::uint8_t(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
}

}  // namespace

SensorImage remap_serial(const SensorImage& img, const RectifyMap& map) {
  if (img.width <= 0 || img.height <= 0) {
    throw std::invalid_argument("remap: empty source image");
  }
  SensorImage out(map.width, map.height);
  for (int y = 0; y < map.height; ++y) remap_row(img, map, out, y);
  return out;
}

SensorImage remap(const SensorImage& img, const RectifyMap& map) {
  if (img.width <= 0 || img.height <= 0) {
    throw std::invalid_argument("remap: empty source image");
  }
  SensorImage out(map.width, map.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < map.height; ++y) remap_row(img, map, out, y);
  return out;
}

SensorImage crop_around(const SensorImage& img, const ContactMask& mask, int padding) {
  if (!(mask.width == img.width && mask.height == img.height)) {
    throw std::invalid_argument("crop_around: mask/image dimension mismatch");
  }
  if (padding < 0) throw std::invalid_argument("crop_around: negative padding");
  int min_x = img.width, min_y = img.height, max_x = -1, max_y = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) throw std::invalid_argument("crop_around: no contact in mask");
  min_x = std::max(0, min_x - padding);
  min_y = std::max(0, min_y - padding);
  max_x = std::min(img.width - 1, max_x + padding);
  max_y = std::min(img.height - 1, max_y + padding);
  SensorImage out(max_x - min_x + 1, max_y - min_y + 1);
  for (int y = min_y; y <= max_y; ++y) {
    for (int x = min_x; x <= max_x; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x - min_x, y - min_y, c) = img.at(x, y, c);
    }
  }
  return out;
}

}  // namespace wedgetact
