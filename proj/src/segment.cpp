#include "wedgetact/segment.hpp"

#include <stdexcept>

namespace wedgetact {

ReferenceState build_reference(std::span<const SensorImage> frames, std::size_t n) {
  if (n == 0) throw std::invalid_argument("build_reference: n must be >= 1");
  if (frames.size() < n) {
    throw std::invalid_argument("build_reference: fewer frames than requested");
  }
  const int w = frames[0].width, h = frames[0].height;
  ReferenceState ref;
  ref.width = w;
  ref.height = h;
  ref.frame_count = n;
  std::vector<double> sum(std::size_t(w) * h * 3, 0.0);
  for (std::size_t f = 0; f < n; ++f) {
    if (frames[f].width != w || frames[f].height != h) {
      throw std::invalid_argument("build_reference: frame dimension mismatch");
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += frames[f].pixels[i];
  }
  ref.mean.resize(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i) ref.mean[i] = float(sum[i] / double(n));
  return ref;
}

bool contact_pixel(double dr, double dg, double db, const Thresholds& th) {
  if ((dr + dg + db) / 3.0 > th.t0) return true;
  const int over1 = (dr > th.t1) + (dg > th.t1) + (db > th.t1);
  if (over1 >= 1) return true;
  const int over2 = (dr > th.t2) + (dg > th.t2) + (db > th.t2);
  if (over2 >= 2) return true;
  const int over3 = (dr > th.t3) + (dg > th.t3) + (db > th.t3);
  return over3 == 3;
}

namespace {

void segment_row(const SensorImage& frame, const ReferenceState& ref, const Thresholds& th,
                 ContactMask& mask, int y) {
  for (int x = 0; x < frame.width; ++x) {
    const double dr = double(frame.at(x, y, 0)) - ref.at(x, y, 0);
    const double dg = double(frame.at(x, y, 1)) - ref.at(x, y, 1);
    const double db = double(frame.at(x, y, 2)) - ref.at(x, y, 2);
    mask.at(x, y) = contact_pixel(dr, dg, db, th) ? 1 : 0;
  }
}

void check_dims(const SensorImage& frame, const ReferenceState& ref, const Thresholds& th) {
  if (frame.width != ref.width || frame.height != ref.height) {
    throw std::invalid_argument("segment: frame/reference dimension mismatch");
  }
  if (th.t0 < 0 || th.t1 < 0 || th.t2 < 0 || th.t3 < 0) {
    throw std::invalid_argument("segment: thresholds must be nonnegative");
  }
}

}  // namespace

ContactMask segment_serial(const SensorImage& frame, const ReferenceState& ref,
                           const Thresholds& th) {
  check_dims(frame, ref, th);
  ContactMask mask(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y) segment_row(frame, ref, th, mask, y);
  return mask;
}

ContactMask segment(const SensorImage& frame, const ReferenceState& ref, const Thresholds& th) {
  check_dims(frame, ref, th);
  ContactMask mask(frame.width, frame.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < frame.height; ++y) segment_row(frame, ref, th, mask, y);
  return mask;
}

ContactStats stats(const ContactMask& mask) {
  ContactStats out;
  double sx = 0, sy = 0;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      ++out.pixel_count;
      sx += x;
      sy += y;
    }
  }
  const std::size_t total = std::size_t(mask.width) * mask.height;
  out.coverage = total ? double(out.pixel_count) / double(total) : 0.0;
  if (out.pixel_count > 0) {
    out.centroid = Vec2{sx / double(out.pixel_count), sy / double(out.pixel_count)};
  }
  out.components = connected_components(mask, 8);
  return out;
}

ContactMask denoise(const ContactMask& mask, std::size_t min_component) {
  if (min_component == 0) return mask;
  ContactMask out = mask;
  const int w = mask.width, h = mask.height;
  std::vector<int> label(std::size_t(w) * h, -1);
  std::vector<std::size_t> sizes;
  std::vector<std::pair<int, int>> stack;
  static const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = std::size_t(y) * w + x;
      if (!mask.bits[idx] || label[idx] >= 0) continue;
      const int id = int(sizes.size());
      sizes.push_back(0);
      stack.clear();
      stack.emplace_back(x, y);
      label[idx] = id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++sizes[id];
        for (int d = 0; d < 8; ++d) {
          const int nx = cx + dx8[d], ny = cy + dy8[d];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t nidx = std::size_t(ny) * w + nx;
          if (!mask.bits[nidx] || label[nidx] >= 0) continue;
          label[nidx] = id;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] >= 0 && sizes[std::size_t(label[i])] < min_component) out.bits[i] = 0;
  }
  return out;
}

}  // namespace wedgetact
