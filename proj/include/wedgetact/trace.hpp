#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wedgetact/image.hpp"
#include "wedgetact/rng.hpp"
#include "wedgetact/scene.hpp"

namespace wedgetact {

// Radiance accumulators are 64-bit fixed point (2^-20 units). Integer sums
// are associative, so partial traces merge bit-exactly in any order: the
// parallel tracer, the serial reference, and split-seed halves all agree.
inline constexpr double kRadianceScale = 1048576.0;  // 2^20

/// Per-pixel RGB radiance sums across the sensing span of the touching
/// surface, plus the number of rays that produced them.
struct CameraProfile {
  int pixel_count = 0;
  std::uint64_t ray_count = 0;
  std::vector<std::array<std::int64_t, 3>> accum;

  CameraProfile() = default;
  explicit CameraProfile(int pixels) : pixel_count(pixels), accum(pixels, {0, 0, 0}) {}

  /// Additive merge of an independent trace (accumulators and ray counts).
  void merge_from(const CameraProfile& other);

  /// Raw accumulated radiance for one pixel/channel.
  double radiance_sum(int pixel, int channel) const {
    return double(accum[pixel][channel]) / kRadianceScale;
  }
  /// Per-ray normalized radiance; comparable across different ray counts.
  double mean_radiance(int pixel, int channel) const {
    return ray_count ? radiance_sum(pixel, channel) / double(ray_count) : 0.0;
  }
  /// Per-ray normalized radiance averaged over the three channels.
  double mean_radiance_gray(int pixel) const {
    return (mean_radiance(pixel, 0) + mean_radiance(pixel, 1) + mean_radiance(pixel, 2)) / 3.0;
  }
  bool all_zero() const;

  bool operator==(const CameraProfile&) const = default;
};

/// Forward Monte Carlo transport of `rays` light paths through the scene.
/// Even ray indices sample the LED cone, odd indices the ambient field above
/// the touching surface. Deterministic in (scene, contact, seed, rays); the
/// OpenMP schedule cannot change the result. Throws on rays == 0 or an
/// invalid scene/contact.
CameraProfile trace(const Scene2D& scene, const ContactSpec& contact, StreamSeed seed,
                    std::uint64_t rays);

/// Serial reference tracer; bit-identical to trace().
CameraProfile trace_serial(const Scene2D& scene, const ContactSpec& contact, StreamSeed seed,
                           std::uint64_t rays);

struct LeakageStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean/std over pixels of the per-ray gray radiance of a no-contact trace.
LeakageStats measure_leakage(const Scene2D& scene, StreamSeed seed, std::uint64_t rays);

enum class SweepVariable { ExternalIntensity, LedIntensity, ThetaS };

struct SweepRow {
  double value = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// No-contact leakage as one scene parameter varies. Requires >= 2 values.
/// Every row is traced with the same seed so rows differ only in the swept
/// parameter.
std::vector<SweepRow> leakage_sweep(const OpticalConfig& base, SweepVariable variable,
                                    const std::vector<double>& values, StreamSeed seed,
                                    std::uint64_t rays);

/// Exposure scale anchoring the arbitrary radiance units to gray levels: a
/// reference trace with a white contact across the whole sensing span (LED
/// only, ambient off) is scaled so its brightest pixel sits at gray 200.
/// Uses a fixed internal seed; depends only on the config.
double calibrate_exposure(const OpticalConfig& cfg);

/// Returns cfg.exposure_scale when set (> 0), otherwise calibrates.
double resolve_exposure(const OpticalConfig& cfg);

/// Renders a raw sensor frame. `rows` holds one ContactSpec per image row
/// (or a single spec extruded to every row); identical consecutive rows
/// share one trace. Linear radiance maps to 8-bit through exposure_scale
/// with clipping; Gaussian noise (sigma in gray levels) is added per pixel
/// from a stream derived from the seed. Throws on zero dimensions.
SensorImage render(const Scene2D& scene, const std::vector<ContactSpec>& rows, StreamSeed seed,
                   std::uint64_t rays_per_trace, int height, int width, double exposure_scale,
                   double noise_sigma);

/// Single-spec convenience: the contact becomes a band across all rows.
SensorImage render(const Scene2D& scene, const ContactSpec& contact, StreamSeed seed,
                   std::uint64_t rays_per_trace, int height, int width, double exposure_scale,
                   double noise_sigma);

}  // namespace wedgetact
