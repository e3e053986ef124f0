#include "wedgetact/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wedgetact {

namespace {

constexpr int kMaxBounces = 32;
constexpr double kRouletteFloor = 1e-6;
constexpr double kNudge = 1e-7;  // mm, post-bounce offset off the surface

struct RayState {
  Vec2 pos;
  Vec2 dir;
  std::array<double, 3> radiance{0, 0, 0};
  double last_touch = -1.0;  // mm along the touching surface; <0 = none yet
  bool alive = false;
};

double max_channel(const std::array<double, 3>& r) {
  return std::max(r[0], std::max(r[1], r[2]));
}

/// Unpolarized Fresnel reflectance for incidence cos_i crossing n1 -> n2.
double fresnel_reflectance(double cos_i, double n1, double n2) {
  const double sin_t = n1 / n2 * std::sqrt(std::max(0.0, 1.0 - cos_i * cos_i));
  if (sin_t >= 1.0) return 1.0;
  const double cos_t = std::sqrt(1.0 - sin_t * sin_t);
  const double rs = (n1 * cos_i - n2 * cos_t) / (n1 * cos_i + n2 * cos_t);
  const double rp = (n1 * cos_t - n2 * cos_i) / (n1 * cos_t + n2 * cos_i);
  return 0.5 * (rs * rs + rp * rp);
}

struct Hit {
  int surface = -1;
  double t = 0.0;
  double t_seg = 0.0;
};

Hit nearest_hit(const Scene2D& scene, Vec2 pos, Vec2 dir) {
  Hit best;
  best.t = 1e30;
  for (std::size_t i = 0; i < scene.surfaces.size(); ++i) {
    double t, u;
    if (!intersect_ray_segment(pos, dir, scene.surfaces[i].seg, t, u)) continue;
    if (t < best.t) {
      best.surface = int(i);
      best.t = t;
      best.t_seg = u;
    }
  }
  return best;
}

void deposit(CameraProfile& out, const Scene2D& scene, double touch_s,
             const std::array<double, 3>& radiance) {
  const OpticalConfig& cfg = scene.config;
  const double span = cfg.sensing_end - cfg.sensing_start;
  const double rel = (touch_s - cfg.sensing_start) / span;
  if (rel < 0.0 || rel >= 1.0) return;  // under the black-gel perimeter
  const int px = int(rel * out.pixel_count);
  for (int c = 0; c < 3; ++c) {
    out.accum[px][c] += std::llround(radiance[c] * kRadianceScale);
  }
}

/// Walks one ray through the medium until it is absorbed, exits, or is
/// terminated; deposits into `out` if it leaves through the viewing surface
/// toward the camera with a recorded touching-surface position.
void propagate(const Scene2D& scene, const ContactSpec& contact, RayRng& rng, RayState ray,
               CameraProfile& out) {
  const OpticalConfig& cfg = scene.config;
  const double n_rel_exit = cfg.media.n_medium / cfg.media.n_air;

  for (int bounce = 0; ray.alive && bounce < kMaxBounces; ++bounce) {
    const Hit hit = nearest_hit(scene, ray.pos, ray.dir);
    if (hit.surface < 0) return;  // escaped through a corner; drop it
    const SceneSurface& surf = scene.surfaces[hit.surface];
    const Vec2 p = ray.pos + hit.t * ray.dir;
    const Vec2 n = surf.outward_normal;
    const Vec2 tangent = surf.seg.dir();
    const double cos_i = dot(ray.dir, n);      // > 0 when leaving the medium
    const double sin_i = dot(ray.dir, tangent);  // signed tangential component

    switch (surf.kind) {
      case SurfaceKind::Touching: {
        const double s = hit.t_seg * surf.seg.length();
        ray.last_touch = s;
        if (contact.find(s) != nullptr) {
          // Optical contact: the object scatters LED light diffusely.
          const Rgb a = contact.albedo_at(s);
          ray.radiance[0] *= a.r;
          ray.radiance[1] *= a.g;
          ray.radiance[2] *= a.b;
          const double sin_d = rng.uniform(-1.0, 1.0);  // cosine-weighted
          const double cos_d = std::sqrt(1.0 - sin_d * sin_d);
          ray.dir = sin_d * tangent - cos_d * n;
        } else {
          // Bare interface: TIR keeps the ray, otherwise it leaks outside.
          const double incidence = std::acos(std::clamp(std::abs(cos_i), 0.0, 1.0));
          bool reflects = incidence >= scene.theta_c;
          if (!reflects && cfg.fresnel) {
            reflects = rng.next_double() <
                       fresnel_reflectance(std::abs(cos_i), cfg.media.n_medium, cfg.media.n_air);
          }
          if (!reflects) return;  // transmitted into the environment
          ray.dir = reflect(ray.dir, n);
        }
        break;
      }
      case SurfaceKind::Viewing: {
        const double incidence = std::acos(std::clamp(std::abs(cos_i), 0.0, 1.0));
        bool reflects = incidence >= scene.theta_c;
        if (!reflects && cfg.fresnel) {
          reflects = rng.next_double() <
                     fresnel_reflectance(std::abs(cos_i), cfg.media.n_medium, cfg.media.n_air);
        }
        if (reflects) {
          ray.dir = reflect(ray.dir, n);
          break;
        }
        // Refract out; capture if the exit ray heads into the camera's FOV
        // and the path has a touching-surface position to image.
        const double sin_t = n_rel_exit * sin_i;
        const double cos_t = std::sqrt(std::max(0.0, 1.0 - sin_t * sin_t));
        const Vec2 exit_dir = normalized(cos_t * n + sin_t * tangent);
        if (ray.last_touch >= 0.0) {
          const Vec2 to_cam = normalized(cfg.camera.position - p);
          const double c = std::clamp(dot(exit_dir, to_cam), -1.0, 1.0);
          if (std::acos(c) <= cfg.camera.fov / 2.0) {
            deposit(out, scene, ray.last_touch, ray.radiance);
          }
        }
        return;
      }
      case SurfaceKind::Absorber: {
        if (rng.next_double() < cfg.absorptivity) return;
        ray.dir = reflect(ray.dir, n);
        break;
      }
    }

    ray.pos = p + kNudge * ray.dir;

    const double peak = max_channel(ray.radiance);
    if (peak <= 0.0) return;
    if (peak < kRouletteFloor) {  // Russian roulette
      if (rng.next_double() < 0.5) return;
      for (double& r : ray.radiance) r *= 2.0;
    }
  }
}

/// Builds and propagates ray `index` of the stream block. Even indices
/// sample the LED cone; odd indices sample the ambient field entering
/// through the touching surface.
void trace_one(const Scene2D& scene, const ContactSpec& contact, std::uint64_t key,
               std::uint64_t index, CameraProfile& out) {
  RayRng rng(key, index);
  const OpticalConfig& cfg = scene.config;
  RayState ray;

  if (index % 2 == 0) {
    if (cfg.led_intensity <= 0.0) return;
    const double a = rng.uniform(cfg.led.axis - cfg.led.half_angle,
                                 cfg.led.axis + cfg.led.half_angle);
    ray.pos = cfg.led.position;
    ray.dir = unit_from_angle(a);
    ray.radiance = {cfg.led_intensity, cfg.led_intensity, cfg.led_intensity};
    ray.alive = true;
    propagate(scene, contact, rng, ray, out);
    return;
  }

  if (cfg.ambient_intensity <= 0.0) return;
  const Segment2& touch = scene.touching().seg;
  const Vec2 n = scene.touching().outward_normal;
  const Vec2 tangent = touch.dir();
  const double s = rng.uniform(0.0, touch.length());
  const double phi = rng.uniform(-kPi / 2, kPi / 2);  // incidence from outside
  if (contact.find(s)) return;  // the contacting object blocks external light
  if (cfg.fresnel &&
      rng.next_double() < fresnel_reflectance(std::cos(phi), cfg.media.n_air, cfg.media.n_medium)) {
    return;  // bounced off the surface back into the environment
  }
  const double sin_r = std::sin(phi) * cfg.media.n_air / cfg.media.n_medium;
  const double cos_r = std::sqrt(1.0 - sin_r * sin_r);
  ray.pos = touch.point_at(s / touch.length()) - kNudge * n;
  ray.dir = sin_r * tangent - cos_r * n;
  ray.radiance = {cfg.ambient_intensity, cfg.ambient_intensity, cfg.ambient_intensity};
  ray.last_touch = s;
  ray.alive = true;
  propagate(scene, contact, rng, ray, out);
}

ContactSpec validated_contact(const Scene2D& scene, const ContactSpec& contact) {
  ContactSpec sorted = contact;
  sorted.validate(scene.config.touch_width());
  return sorted;
}

}  // namespace

void CameraProfile::merge_from(const CameraProfile& other) {
  if (other.pixel_count != pixel_count) {
    throw std::invalid_argument("CameraProfile::merge_from: pixel count mismatch");
  }
  for (int i = 0; i < pixel_count; ++i) {
    for (int c = 0; c < 3; ++c) accum[i][c] += other.accum[i][c];
  }
  ray_count += other.ray_count;
}

bool CameraProfile::all_zero() const {
  for (const auto& px : accum) {
    if (px[0] != 0 || px[1] != 0 || px[2] != 0) return false;
  }
  return true;
}

CameraProfile trace_serial(const Scene2D& scene, const ContactSpec& contact, StreamSeed seed,
                           std::uint64_t rays) {
  if (rays == 0) throw std::invalid_argument("trace: rays must be >= 1");
  scene.validate();
  const ContactSpec sorted = validated_contact(scene, contact);
  CameraProfile out(scene.config.camera.pixel_count);
  for (std::uint64_t i = 0; i < rays; ++i) {
    trace_one(scene, sorted, seed.key, seed.first_ray + i, out);
  }
  out.ray_count = rays;
  return out;
}

CameraProfile trace(const Scene2D& scene, const ContactSpec& contact, StreamSeed seed,
                    std::uint64_t rays) {
  if (rays == 0) throw std::invalid_argument("trace: rays must be >= 1");
  scene.validate();
  const ContactSpec sorted = validated_contact(scene, contact);
  CameraProfile out(scene.config.camera.pixel_count);
#pragma omp parallel
  {
    CameraProfile local(scene.config.camera.pixel_count);
#pragma omp for schedule(static)
    for (long long i = 0; i < (long long)rays; ++i) {
      trace_one(scene, sorted, seed.key, seed.first_ray + std::uint64_t(i), local);
    }
#pragma omp critical
    {
      for (int p = 0; p < out.pixel_count; ++p) {
        for (int c = 0; c < 3; ++c) out.accum[p][c] += local.accum[p][c];
      }
    }
  }
  out.ray_count = rays;
  return out;
}

LeakageStats measure_leakage(const Scene2D& scene, StreamSeed seed, std::uint64_t rays) {
  const CameraProfile profile = trace(scene, ContactSpec{}, seed, rays);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < profile.pixel_count; ++i) {
    const double v = profile.mean_radiance_gray(i);
    sum += v;
    sum2 += v * v;
  }
  const double n = double(profile.pixel_count);
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sum2 / n - mean * mean))};
}

std::vector<SweepRow> leakage_sweep(const OpticalConfig& base, SweepVariable variable,
                                    const std::vector<double>& values, StreamSeed seed,
                                    std::uint64_t rays) {
  if (values.size() < 2) {
    throw std::invalid_argument("leakage_sweep: needs at least two values");
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    OpticalConfig cfg = base;
    Scene2D scene;
    switch (variable) {
      case SweepVariable::ExternalIntensity:
        cfg.ambient_intensity = v;
        scene = Scene2D::build(cfg);
        break;
      case SweepVariable::LedIntensity:
        cfg.led_intensity = v;
        scene = Scene2D::build(cfg);
        break;
      case SweepVariable::ThetaS:
        scene = build_theta_s_variant(cfg, v);
        break;
    }
    const LeakageStats stats = measure_leakage(scene, seed, rays);
    rows.push_back({v, stats.mean, stats.stddev});
  }
  return rows;
}

double calibrate_exposure(const OpticalConfig& cfg) {
  OpticalConfig ref = cfg;
  ref.ambient_intensity = 0.0;
  const Scene2D scene = Scene2D::build(ref);
  ContactSpec contact;
  contact.intervals.push_back({ref.sensing_start, ref.sensing_end, {1.0, 1.0, 1.0}, {}});
  const CameraProfile profile = trace(scene, contact, {0xCA11B8A7EULL, 0}, 200000);
  double peak = 0.0;
  for (int i = 0; i < profile.pixel_count; ++i) {
    for (int c = 0; c < 3; ++c) peak = std::max(peak, profile.mean_radiance(i, c));
  }
  return peak > 0.0 ? 200.0 / peak : 1.0;
}

double resolve_exposure(const OpticalConfig& cfg) {
  return cfg.exposure_scale > 0.0 ? cfg.exposure_scale : calibrate_exposure(cfg);
}

SensorImage render(const Scene2D& scene, const std::vector<ContactSpec>& rows, StreamSeed seed,
                   std::uint64_t rays_per_trace, int height, int width, double exposure_scale,
                   double noise_sigma) {
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("render: image dimensions must be positive");
  }
  if (rows.size() != 1 && rows.size() != std::size_t(height)) {
    throw std::invalid_argument("render: need one contact spec or one per row");
  }

  Scene2D traced = scene;
  traced.config.camera.pixel_count = width;

  // Trace once per run of identical consecutive row specs.
  std::vector<CameraProfile> profiles(rows.size());
  std::vector<std::size_t> row_group(std::size_t(height), 0);
  std::size_t group_of_prev = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0 && rows[r] == rows[group_of_prev]) {
      if (rows.size() == std::size_t(height)) row_group[r] = group_of_prev;
      continue;
    }
    group_of_prev = r;
    if (rows.size() == std::size_t(height)) row_group[r] = r;
    profiles[r] = trace(traced, rows[r], {seed.key, seed.first_ray + r * rays_per_trace},
                        rays_per_trace);
  }
  if (rows.size() == 1) std::fill(row_group.begin(), row_group.end(), 0);

  // Per-pixel noise stream, independent of the ray streams.
  std::uint64_t noise_key = seed.key ^ 0xD1CEB00C5ULL;
  splitmix64(noise_key);
  noise_key ^= seed.first_ray;

  SensorImage img(width, height);
  const double exposure = exposure_scale;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const CameraProfile& profile = profiles[row_group[std::size_t(y)]];
    for (int x = 0; x < width; ++x) {
      RayRng noise(noise_key, std::uint64_t(y) * width + x);
      for (int c = 0; c < 3; ++c) {
        double v = profile.mean_radiance(x, c) * exposure;
        if (noise_sigma > 0.0) v += noise_sigma * noise.next_gaussian();
        img.at(x, y, c) = std::uint8_t(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return img;
}

SensorImage render(const Scene2D& scene, const ContactSpec& contact, StreamSeed seed,
                   std::uint64_t rays_per_trace, int height, int width, double exposure_scale,
                   double noise_sigma) {
  return render(scene, std::vector<ContactSpec>{contact}, seed, rays_per_trace, height, width,
                exposure_scale, noise_sigma);
}

}  // namespace wedgetact
