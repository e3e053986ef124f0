#include "wedgetact/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wedgetact {

namespace {

double gray_at(const SensorImage& img, int x, int y) {
  return (double(img.at(x, y, 0)) + img.at(x, y, 1) + img.at(x, y, 2)) / 3.0;
}

/// Intensity-weighted centroid of one labeled component.
Vec2 weighted_centroid(const SensorImage& img, const ContactMask& mask, const Component& c) {
  double sw = 0, sx = 0, sy = 0;
  for (int y = c.min_y; y <= c.max_y; ++y) {
    for (int x = c.min_x; x <= c.max_x; ++x) {
      if (!mask.at(x, y)) continue;
      const double w = gray_at(img, x, y);
      sw += w;
      sx += w * x;
      sy += w * y;
    }
  }
  if (sw <= 0) return {c.centroid_x, c.centroid_y};
  return {sx / sw, sy / sw};
}

}  // namespace

GridDetection detect_grid(const SensorImage& img, const GridSpec& spec, double threshold) {
  if (spec.rows < 2 || spec.cols < 2 || spec.pitch_mm <= 0) {
    throw std::invalid_argument("detect_grid: invalid grid spec");
  }
  const int wanted = spec.rows * spec.cols;

  ContactMask bright(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      bright.at(x, y) = gray_at(img, x, y) > threshold ? 1 : 0;
    }
  }
  std::vector<Component> comps = connected_components(bright, 8);
  if (int(comps.size()) < wanted) {
    throw GridDetectError("too few imprints: found " + std::to_string(comps.size()) +
                          ", need " + std::to_string(wanted));
  }
  comps.resize(wanted);  // largest first

  // Weighted centroids can overlap bounding boxes of dropped noise blobs;
  // restrict weighting to the blob's own pixels via the mask.
  std::vector<Vec2> pts(wanted);
  for (int i = 0; i < wanted; ++i) pts[i] = weighted_centroid(img, bright, comps[i]);

  // Hull extremes: TL minimizes x+y, BR maximizes it; TR maximizes x-y,
  // BL minimizes it. Valid for grid rotations well past +/-15 degrees.
  const auto extreme = [&](auto key) {
    int best = 0;
    for (int i = 1; i < wanted; ++i) {
      if (key(pts[i]) < key(pts[best])) best = i;
    }
    return best;
  };
  const int tl = extreme([](Vec2 p) { return p.x + p.y; });
  const int br = extreme([](Vec2 p) { return -(p.x + p.y); });
  const int tr = extreme([](Vec2 p) { return -(p.x - p.y); });
  const int bl = extreme([](Vec2 p) { return p.x - p.y; });

  // Axes from the corner imprints, one pitch step per unit grid coordinate.
  const Vec2 u = (1.0 / (2.0 * (spec.cols - 1))) * ((pts[tr] - pts[tl]) + (pts[br] - pts[bl]));
  const Vec2 v = (1.0 / (2.0 * (spec.rows - 1))) * ((pts[bl] - pts[tl]) + (pts[br] - pts[tr]));
  const double det = cross(u, v);
  if (std::abs(det) < 1e-9) {
    throw GridDetectError("degenerate grid: corner axes are collinear");
  }

  GridDetection out;
  out.spec = spec;
  out.centers.assign(std::size_t(wanted), Vec2{});
  std::vector<int> claimed(std::size_t(wanted), -1);
  for (int i = 0; i < wanted; ++i) {
    const Vec2 d = pts[i] - pts[tl];
    // Solve d = col*u + row*v.
    const double col = cross(d, v) / det;
    const double row = cross(u, d) / det;
    const int ci = int(std::lround(col));
    const int ri = int(std::lround(row));
    if (ci < 0 || ci >= spec.cols || ri < 0 || ri >= spec.rows) {
      throw GridDetectError("imprint " + std::to_string(i) + " at (" +
                            std::to_string(pts[i].x) + ", " + std::to_string(pts[i].y) +
                            ") falls outside the grid");
    }
    if (std::abs(col - ci) > 0.35 || std::abs(row - ri) > 0.35) {
      throw GridDetectError("ambiguous ordering for imprint " + std::to_string(i) +
                            " near grid cell (" + std::to_string(ri) + ", " +
                            std::to_string(ci) + ")");
    }
    const int slot = ri * spec.cols + ci;
    if (claimed[slot] >= 0) {
      throw GridDetectError("imprints " + std::to_string(claimed[slot]) + " and " +
                            std::to_string(i) + " both map to grid cell (" +
                            std::to_string(ri) + ", " + std::to_string(ci) + ")");
    }
    claimed[slot] = i;
    out.centers[slot] = pts[i];
  }

  const auto find_slot = [&](int idx) {
    for (int s = 0; s < wanted; ++s) {
      if (claimed[s] == idx) return s;
    }
    return -1;
  };
  out.corner_indices = {find_slot(tl), find_slot(tr), find_slot(bl), find_slot(br)};

  const double span_x = (spec.cols - 1) * spec.pitch_mm;
  const double span_y = (spec.rows - 1) * spec.pitch_mm;
  out.mean_pixel_pitch = (norm(pts[tr] - pts[tl]) / span_x + norm(pts[br] - pts[bl]) / span_x +
                          norm(pts[bl] - pts[tl]) / span_y + norm(pts[br] - pts[tr]) / span_y) /
                         4.0;
  return out;
}

RectifyMap build_rectify_map(const GridDetection& det, const GridSpec& spec,
                             double out_resolution) {
  if (out_resolution <= 0) {
    throw std::invalid_argument("build_rectify_map: resolution must be positive");
  }
  if (int(det.centers.size()) != spec.rows * spec.cols) {
    throw std::invalid_argument("build_rectify_map: detection/spec mismatch");
  }
  const Vec2 c00 = det.center(0, 0), c01 = det.center(0, spec.cols - 1);
  const Vec2 c10 = det.center(spec.rows - 1, 0);
  if (std::abs(cross(c01 - c00, c10 - c00)) < 1e-9) {
    throw std::invalid_argument("build_rectify_map: collinear detections");
  }

  const double step = spec.pitch_mm * out_resolution;  // px between grid centers
  const double margin = 0.5 * step;                    // half a pitch around the grid
  const int out_w = int(std::lround(2 * margin + (spec.cols - 1) * step));
  const int out_h = int(std::lround(2 * margin + (spec.rows - 1) * step));

  RectifyMap map(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      // Grid coordinates of this destination pixel; boundary cells
      // extrapolate into the margin.
      const double gx = (x - margin) / step;
      const double gy = (y - margin) / step;
      const int ci = std::clamp(int(std::floor(gx)), 0, spec.cols - 2);
      const int ri = std::clamp(int(std::floor(gy)), 0, spec.rows - 2);
      const double fx = gx - ci;
      const double fy = gy - ri;
      const Vec2 p00 = det.center(ri, ci), p10 = det.center(ri, ci + 1);
      const Vec2 p01 = det.center(ri + 1, ci), p11 = det.center(ri + 1, ci + 1);
      const Vec2 src = (1 - fy) * ((1 - fx) * p00 + fx * p10) + fy * ((1 - fx) * p01 + fx * p11);
      const std::size_t i = std::size_t(y) * out_w + x;
      map.src_x[i] = float(src.x);
      map.src_y[i] = float(src.y);
    }
  }
  return map;
}

}  // namespace wedgetact
