#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "wedgetact/image.hpp"

namespace wedgetact {

struct GridSpec {
  int rows = 5;
  int cols = 5;
  double pitch_mm = 3.0;
};

/// Raised when imprint detection cannot produce an unambiguous grid.
struct GridDetectError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridDetection {
  GridSpec spec;
  std::vector<Vec2> centers;          // rows*cols, row-major, sub-pixel
  std::array<int, 4> corner_indices;  // TL, TR, BL, BR within `centers`
  double mean_pixel_pitch = 0.0;      // px per mm

  const Vec2& center(int row, int col) const { return centers[row * spec.cols + col]; }
};

/// Finds the rows*cols brightest imprints above `threshold` (gray level),
/// orders them row-major along the axes spanned by the four outermost
/// imprints, and estimates pixel pitch from corner-to-corner distances.
GridDetection detect_grid(const SensorImage& img, const GridSpec& spec, double threshold = 60.0);

/// Builds the rectification map: the detected centers map onto an evenly
/// spaced grid at `out_resolution` px/mm, interpolated piecewise-bilinearly
/// over the grid cells (extrapolated into a half-pitch margin); the output
/// is cropped to the grid plus that margin.
RectifyMap build_rectify_map(const GridDetection& det, const GridSpec& spec,
                             double out_resolution);

}  // namespace wedgetact
