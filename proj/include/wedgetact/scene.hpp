#pragma once

#include <vector>

#include "wedgetact/geometry.hpp"
#include "wedgetact/optics.hpp"

namespace wedgetact {

struct Rgb {
  double r = 0.0, g = 0.0, b = 0.0;
  bool operator==(const Rgb&) const = default;
};

/// One contact patch along the touching surface, in mm from its left end.
/// `texture`, when nonempty, modulates the albedo across the interval.
struct ContactInterval {
  double start = 0.0;
  double end = 0.0;
  Rgb albedo{1.0, 1.0, 1.0};
  std::vector<Rgb> texture;

  bool operator==(const ContactInterval&) const = default;
};

struct ContactSpec {
  std::vector<ContactInterval> intervals;

  bool empty() const { return intervals.empty(); }
  /// Sorts intervals and rejects overlap or out-of-range endpoints.
  void validate(double touch_width);
  const ContactInterval* find(double s) const;
  Rgb albedo_at(double s) const;

  bool operator==(const ContactSpec&) const = default;
};

enum class SurfaceKind { Touching, Viewing, Absorber };

struct SceneSurface {
  Segment2 seg;
  SurfaceKind kind = SurfaceKind::Absorber;
  Vec2 outward_normal;  // away from the medium; baffles are double-sided
  bool interior = false;
};

/// The sensor cross-section the tracer walks: a closed boundary around the
/// medium (touching, viewing, floor, shell surface A) plus optional interior
/// baffles. Built from an OpticalConfig in the canonical frame.
struct Scene2D {
  OpticalConfig config;
  std::vector<SceneSurface> surfaces;
  double theta_c = 0.0;

  static Scene2D build(const OpticalConfig& cfg);
  /// Throws std::invalid_argument when the boundary chain is not closed,
  /// the LED lies outside the medium, or the polygon is degenerate.
  void validate() const;

  const SceneSurface& touching() const { return surfaces[0]; }
  const SceneSurface& viewing() const { return surfaces[1]; }
  bool point_inside(Vec2 p) const;
};

/// Per-variant scene for shell-angle sweeps. Rebuilding the shell at a
/// smaller theta_s can swallow the configured LED position, so the LED is
/// relocated rightward with 1 mm clearance from surface A when needed,
/// mirroring how a physical wedge variant repositions its internals.
Scene2D build_theta_s_variant(const OpticalConfig& base, double theta_s);

}  // namespace wedgetact
