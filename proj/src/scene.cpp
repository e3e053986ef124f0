#include "wedgetact/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wedgetact {

void ContactSpec::validate(double touch_width) {
  std::sort(intervals.begin(), intervals.end(),
            [](const ContactInterval& a, const ContactInterval& b) { return a.start < b.start; });
  double prev_end = -1.0;
  for (const ContactInterval& iv : intervals) {
    if (!(iv.end > iv.start)) {
      throw std::invalid_argument("contact: interval end must exceed start");
    }
    if (iv.start < -1e-9 || iv.end > touch_width + 1e-9) {
      throw std::invalid_argument("contact: interval outside the touching surface");
    }
    if (iv.start < prev_end - 1e-9) {
      throw std::invalid_argument("contact: overlapping intervals");
    }
    for (const Rgb& a : {iv.albedo}) {
      if (a.r < 0 || a.r > 1 || a.g < 0 || a.g > 1 || a.b < 0 || a.b > 1) {
        throw std::invalid_argument("contact: albedo outside [0,1]");
      }
    }
    prev_end = iv.end;
  }
}

const ContactInterval* ContactSpec::find(double s) const {
  for (const ContactInterval& iv : intervals) {
    if (s >= iv.start && s < iv.end) return &iv;
    if (iv.start > s) break;  // sorted
  }
  return nullptr;
}

Rgb ContactSpec::albedo_at(double s) const {
  const ContactInterval* iv = find(s);
  if (!iv) return {0, 0, 0};
  if (iv->texture.empty()) return iv->albedo;
  const double rel = (s - iv->start) / (iv->end - iv->start);
  const std::size_t n = iv->texture.size();
  const std::size_t k = std::min(n - 1, std::size_t(rel * double(n)));
  const Rgb& t = iv->texture[k];
  return {iv->albedo.r * t.r, iv->albedo.g * t.g, iv->albedo.b * t.b};
}

Scene2D Scene2D::build(const OpticalConfig& cfg) {
  cfg.validate();
  Scene2D scene;
  scene.config = cfg;
  scene.theta_c = critical_angle(cfg.media);

  const Segment2& touch = cfg.touching_surface;
  const Segment2& view = cfg.viewing_surface;
  // Shell surface A hangs off the touching surface's left end and slants
  // under it as theta_s drops below pi/2; the floor closes the loop.
  const Vec2 a_dir{std::cos(cfg.theta_s), -std::sin(cfg.theta_s)};
  const double a_len = cfg.depth / std::sin(cfg.theta_s);
  const Vec2 a_end = touch.a + a_len * a_dir;
  const Vec2 v_end = view.b;
  if (a_end.x >= v_end.x - 1e-9) {
    throw std::invalid_argument("scene: shell angle too shallow for the medium depth");
  }

  scene.surfaces.push_back({touch, SurfaceKind::Touching, {0.0, 1.0}, false});
  const Vec2 v_out = normalized({std::sin(cfg.theta_tv), -std::cos(cfg.theta_tv)});
  scene.surfaces.push_back({view, SurfaceKind::Viewing, v_out, false});
  scene.surfaces.push_back({{v_end, a_end}, SurfaceKind::Absorber, {0.0, -1.0}, false});
  const Vec2 a_out = normalized({-std::sin(cfg.theta_s), -std::cos(cfg.theta_s)});
  scene.surfaces.push_back({{a_end, touch.a}, SurfaceKind::Absorber, a_out, false});

  scene.validate();
  return scene;
}

bool Scene2D::point_inside(Vec2 p) const {
  // Winding by ray casting against the boundary chain.
  int crossings = 0;
  for (const SceneSurface& s : surfaces) {
    if (s.interior) continue;
    const Vec2 a = s.seg.a, b = s.seg.b;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xint > p.x) ++crossings;
    }
  }
  return (crossings % 2) == 1;
}

void Scene2D::validate() const {
  int touching_count = 0, viewing_count = 0;
  std::vector<const SceneSurface*> boundary;
  for (const SceneSurface& s : surfaces) {
    if (s.seg.length() <= 1e-9) throw std::invalid_argument("scene: degenerate surface");
    if (s.kind == SurfaceKind::Touching) ++touching_count;
    if (s.kind == SurfaceKind::Viewing) ++viewing_count;
    if (!s.interior) boundary.push_back(&s);
  }
  if (touching_count != 1 || viewing_count != 1) {
    throw std::invalid_argument("scene: needs exactly one touching and one viewing surface");
  }
  // The boundary surfaces must chain into a single closed loop.
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const Vec2 end = boundary[i]->seg.b;
    const Vec2 next = boundary[(i + 1) % boundary.size()]->seg.a;
    if (norm(end - next) > 1e-6) {
      throw std::invalid_argument("scene: boundary is not closed");
    }
  }
  if (!point_inside(config.led.position)) {
    throw std::invalid_argument("scene: LED lies outside the medium");
  }
}

Scene2D build_theta_s_variant(const OpticalConfig& base, double theta_s) {
  OpticalConfig cfg = base;
  cfg.theta_s = theta_s;
  const double led_depth = -cfg.led.position.y;
  const double wall_x = led_depth / std::tan(theta_s);
  cfg.led.position.x = std::max(cfg.led.position.x, wall_x + 1.0);
  if (cfg.led.position.x >= cfg.touch_width()) {
    throw std::invalid_argument("theta_s variant: no room to place the LED");
  }
  return Scene2D::build(cfg);
}

}  // namespace wedgetact
