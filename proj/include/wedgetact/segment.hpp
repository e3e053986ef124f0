#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wedgetact/image.hpp"

namespace wedgetact {

/// Gray-level deltas for the four-condition contact check.
struct Thresholds {
  double t0 = 25.0;  // mean RGB increase
  double t1 = 20.0;  // any single channel
  double t2 = 30.0;  // at least two channels
  double t3 = 40.0;  // all three channels
};

/// Pixel-wise mean of N no-contact frames, frozen once built.
struct ReferenceState {
  int width = 0;
  int height = 0;
  std::size_t frame_count = 0;
  std::vector<float> mean;  // RGB, row-major

  float at(int x, int y, int c) const { return mean[(std::size_t(y) * width + x) * 3 + c]; }
};

/// Averages the first `n` frames. Throws when fewer frames are supplied or
/// dimensions disagree.
ReferenceState build_reference(std::span<const SensorImage> frames, std::size_t n);

/// A pixel is contact iff any of: mean delta > t0; one channel > t1; two
/// channels > t2; all three > t3. Deltas are signed (frame minus reference);
/// only positive excess can trigger. OpenMP over rows.
ContactMask segment(const SensorImage& frame, const ReferenceState& ref, const Thresholds& th);
/// Serial reference for segment; identical output.
ContactMask segment_serial(const SensorImage& frame, const ReferenceState& ref,
                           const Thresholds& th);

/// The raw per-pixel rule on one delta triple.
bool contact_pixel(double dr, double dg, double db, const Thresholds& th);

struct ContactStats {
  std::size_t pixel_count = 0;
  double coverage = 0.0;
  std::optional<Vec2> centroid;  // empty mask has no centroid
  std::vector<Component> components;
};

ContactStats stats(const ContactMask& mask);

/// Drops connected components (8-connectivity) smaller than min_component
/// pixels; 0 is the identity.
ContactMask denoise(const ContactMask& mask, std::size_t min_component);

}  // namespace wedgetact
