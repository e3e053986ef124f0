#include "wedgetact/optics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wedgetact {

namespace {
constexpr double kAngleTol = 1e-9;
}

double critical_angle(const MediumPair& media) {
  if (!(media.n_medium > media.n_air) || !(media.n_air > 0.0)) {
    throw std::invalid_argument("critical_angle: requires n_medium > n_air > 0");
  }
  return std::asin(media.n_air / media.n_medium);
}

std::optional<double> refract(double incident_angle, const MediumPair& media, bool entering) {
  if (incident_angle < 0.0 || incident_angle >= kPi / 2) {
    throw std::invalid_argument("refract: incidence must lie in [0, pi/2)");
  }
  if (entering) {
    return std::asin(std::sin(incident_angle) * media.n_air / media.n_medium);
  }
  const double s = std::sin(incident_angle) * media.n_medium / media.n_air;
  if (s >= 1.0) return std::nullopt;  // total internal reflection
  return std::asin(s);
}

ConditionCheck check_external_rejection(const OpticalConfig& cfg) {
  const double margin = cfg.theta_tv - 2.0 * critical_angle(cfg.media);
  return {margin > 0.0, margin};
}

LedIncidence max_led_incidence(const LedCone& led, const Segment2& touching) {
  // The touching surface is flat, so incidence depends only on ray direction:
  // theta_it = angle between the direction and the outward surface normal.
  const Vec2 n = normalized({-(touching.b - touching.a).y, (touching.b - touching.a).x});
  // In the canonical frame n = (0,1); keep it general for rotated segments.
  const auto incidence = [&](Vec2 d) { return std::acos(std::clamp(dot(d, n), -1.0, 1.0)); };
  const auto hits = [&](Vec2 d) {
    double t_ray, t_seg;
    return intersect_ray_segment(led.position, d, touching, t_ray, t_seg);
  };

  LedIncidence out;
  std::vector<Vec2> candidates;
  // Cone boundary rays, the axis, and a guard set of interior directions.
  for (int i = 0; i <= 16; ++i) {
    const double a = led.axis - led.half_angle + (2.0 * led.half_angle) * i / 16.0;
    candidates.push_back(unit_from_angle(a));
  }
  // Directions toward the segment endpoints, when inside the cone.
  for (Vec2 end : {touching.a, touching.b}) {
    const Vec2 d = normalized(end - led.position);
    const double a = std::atan2(d.y, d.x);
    double rel = std::remainder(a - led.axis, 2.0 * kPi);
    if (std::abs(rel) <= led.half_angle + kAngleTol) candidates.push_back(d);
  }
  for (Vec2 d : candidates) {
    if (!hits(d)) continue;
    out.hits_surface = true;
    out.max_theta_it = std::max(out.max_theta_it, incidence(d));
  }
  return out;
}

ConditionCheck check_internal_rejection(const OpticalConfig& cfg) {
  const double theta_i = cfg.theta_tv - critical_angle(cfg.media);
  const LedIncidence led = max_led_incidence(cfg.led, cfg.touching_surface);
  // A cone that misses the surface entirely trivially satisfies the condition.
  const double worst = led.hits_surface ? led.max_theta_it : 0.0;
  const double margin = theta_i - worst;
  return {margin > 0.0, margin};
}

ContactTransmission check_contact_transmission(const OpticalConfig& cfg) {
  const double theta_c = critical_angle(cfg.media);
  const double margin = kPi / 2 + theta_c - cfg.theta_tv;
  ContactTransmission out;
  out.check = {margin > 0.0, margin};
  out.window_lo = std::max(cfg.theta_tv - kPi / 2, -theta_c);
  out.window_hi = theta_c;
  return out;
}

double camera_exclusion_angle(const OpticalConfig& cfg) {
  const double theta_c = critical_angle(cfg.media);
  if (cfg.theta_tv < theta_c - kAngleTol || cfg.theta_tv >= 2.0 * theta_c) {
    throw std::invalid_argument(
        "camera_exclusion_angle: requires theta_c <= theta_tv < 2*theta_c");
  }
  const double theta_iv = std::max(cfg.theta_tv - theta_c, 0.0);
  const double s = cfg.media.n_medium / cfg.media.n_air * std::sin(theta_iv);
  return kPi / 2 + cfg.theta_tv - std::asin(std::min(s, 1.0));
}

ConditionReport full_report(const OpticalConfig& cfg) {
  cfg.validate();
  ConditionReport r;
  r.external_rejection = check_external_rejection(cfg);
  r.internal_rejection = check_internal_rejection(cfg);
  r.contact_transmission = check_contact_transmission(cfg).check;
  return r;
}

void OpticalConfig::validate() const {
  if (!(media.n_medium > media.n_air) || !(media.n_air > 0.0)) {
    throw std::invalid_argument("config: requires n_medium > n_air > 0");
  }
  if (!(theta_tv > 0.0 && theta_tv < kPi)) {
    throw std::invalid_argument("config: theta_tv must lie in (0, pi)");
  }
  if (!(theta_s > 0.0 && theta_s <= kPi / 2)) {
    throw std::invalid_argument("config: theta_s must lie in (0, pi/2]");
  }
  if (touching_surface.length() <= 0.0 || viewing_surface.length() <= 0.0) {
    throw std::invalid_argument("config: degenerate surface segment");
  }
  if (!(absorptivity >= 0.0 && absorptivity <= 1.0)) {
    throw std::invalid_argument("config: absorptivity must lie in [0, 1]");
  }
  if (!(sensing_start >= 0.0 && sensing_end > sensing_start &&
        sensing_end <= touch_width() + 1e-9)) {
    throw std::invalid_argument("config: sensing span must fit the touching surface");
  }
  if (led.half_angle < 0.0 || led.half_angle >= kPi) {
    throw std::invalid_argument("config: led cone half-angle out of range");
  }
  if (led_intensity < 0.0 || ambient_intensity < 0.0) {
    throw std::invalid_argument("config: intensities must be nonnegative");
  }
  if (camera.pixel_count <= 0) {
    throw std::invalid_argument("config: camera pixel count must be positive");
  }
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("config: noise sigma must be nonnegative");
  }
}

OpticalConfig make_config(double n_medium, double theta_tv, double theta_s,
                          double touch_width, double depth) {
  OpticalConfig cfg;
  cfg.media.n_medium = n_medium;
  cfg.theta_tv = theta_tv;
  cfg.theta_s = theta_s;
  cfg.depth = depth;
  cfg.touching_surface = {{0.0, 0.0}, {touch_width, 0.0}};
  // Viewing surface hangs off the right end at interior angle theta_tv,
  // reaching down to the medium floor.
  const Vec2 vdir{-std::cos(theta_tv), -std::sin(theta_tv)};
  const double vlen = depth / std::sin(theta_tv);
  cfg.viewing_surface = {{touch_width, 0.0}, Vec2{touch_width, 0.0} + vlen * vdir};
  cfg.sensing_start = touch_width / 12.0;
  cfg.sensing_end = touch_width - touch_width / 12.0;
  // LED deep under the sensing span, aimed straight up, cone wide enough to
  // light the whole span while keeping max theta_it under theta_tv - theta_c.
  cfg.led.position = {touch_width / 2.0, -(depth - 0.5)};
  cfg.led.axis = kPi / 2;
  cfg.led.half_angle = deg_to_rad(45.0);
  // Camera behind the viewing surface, looking at its midpoint.
  const Vec2 vout = normalized({std::sin(theta_tv), -std::cos(theta_tv)});
  const Vec2 vmid = cfg.viewing_surface.point_at(0.5);
  cfg.camera.position = vmid + 6.0 * vout;
  cfg.camera.fov = deg_to_rad(120.0);
  return cfg;
}

}  // namespace wedgetact
