#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "wedgetact/geometry.hpp"

namespace wedgetact {

/// Dense medium against air. A critical angle exists only when n_medium > n_air.
struct MediumPair {
  double n_medium = 1.45;
  double n_air = 1.0;
};

struct LedCone {
  Vec2 position;          // mm, inside the medium
  double axis = kPi / 2;  // emission axis, radians CCW from +x
  double half_angle = 0;  // cone half-angle, radians
};

struct CameraSpec {
  Vec2 position;        // mm, outside the viewing surface
  double fov = 0;       // full field of view, radians
  int pixel_count = 160;
};

/// Full 2D cross-section of the sensor. Canonical frame: the touching surface
/// lies on y = 0 with the medium below it; the viewing surface hangs off its
/// right end at interior angle theta_tv; shell surface A hangs off its left
/// end, slanting under the touching surface as theta_s drops below pi/2.
struct OpticalConfig {
  MediumPair media;
  double theta_tv = kPi / 2;  // touching-to-viewing surface angle, rad
  double theta_s = kPi / 2;   // shell surface-A inclination, rad
  double depth = 6.0;         // medium depth below the touching surface, mm
  Segment2 touching_surface;  // (0,0) -> (W,0) in the canonical frame
  Segment2 viewing_surface;
  double sensing_start = 1.0;  // active span along the touching surface, mm
  double sensing_end = 11.0;   // (the black-gel perimeter is not sensing area)
  LedCone led;
  double led_intensity = 100.0;      // linear lux-proxy, per channel
  double ambient_intensity = 40.0;   // linear lux-proxy, per channel
  CameraSpec camera;
  double absorptivity = 0.95;        // shell/baffle surfaces
  double exposure_scale = 0.0;       // 0 = auto-calibrate (see trace.hpp)
  double noise_sigma = 0.8;          // render noise, gray levels
  bool fresnel = false;              // partial reflection at interfaces

  double touch_width() const { return touching_surface.length(); }
  void validate() const;  // throws std::invalid_argument on a bad config
};

/// Builds the canonical-frame config for given geometry parameters, placing
/// the viewing surface and camera consistently with theta_tv.
OpticalConfig make_config(double n_medium, double theta_tv, double theta_s,
                          double touch_width, double depth);

/// Condition check outcome; satisfied iff margin > 0 (strict at the boundary).
struct ConditionCheck {
  bool satisfied = false;
  double margin = 0.0;  // radians
};

struct ConditionReport {
  ConditionCheck external_rejection;
  ConditionCheck internal_rejection;  // margin = (theta_tv - theta_c) - max theta_it
  ConditionCheck contact_transmission;

  bool all() const {
    return external_rejection.satisfied && internal_rejection.satisfied &&
           contact_transmission.satisfied;
  }
};

/// asin(n_air / n_medium). Throws if no TIR regime exists.
double critical_angle(const MediumPair& media);

/// Snell refraction across the medium/air interface. `entering` means the ray
/// crosses from air into the dense medium (always succeeds); exiting returns
/// nullopt when the incidence meets or exceeds the critical angle (TIR).
std::optional<double> refract(double incident_angle, const MediumPair& media, bool entering);

/// External light rejection: theta_tv > 2 theta_c.
ConditionCheck check_external_rejection(const OpticalConfig& cfg);

/// Internal illumination rejection: every LED-cone ray that reaches the
/// touching surface arrives with incidence theta_it < theta_tv - theta_c.
ConditionCheck check_internal_rejection(const OpticalConfig& cfg);

/// Worst-case LED incidence on the touching surface over the cone, and whether
/// any cone ray reaches the surface at all.
struct LedIncidence {
  double max_theta_it = 0.0;
  bool hits_surface = false;
};
LedIncidence max_led_incidence(const LedCone& led, const Segment2& touching);

/// Contact-light transmission: theta_tv < pi/2 + theta_c. Also reports the
/// transmitted incidence window (max(theta_tv - pi/2, -theta_c), theta_c).
struct ContactTransmission {
  ConditionCheck check;
  double window_lo = 0.0;
  double window_hi = 0.0;
};
ContactTransmission check_contact_transmission(const OpticalConfig& cfg);

/// Boundary angle of the region a camera must avoid when theta_tv < 2 theta_c:
/// pi/2 + theta_tv - asin((n_m/n_a) sin(theta_tv - theta_c)).
/// Valid only for theta_c <= theta_tv < 2 theta_c; throws outside that range.
double camera_exclusion_angle(const OpticalConfig& cfg);

ConditionReport full_report(const OpticalConfig& cfg);

}  // namespace wedgetact
