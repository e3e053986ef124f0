#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wedgetact/rng.hpp"
#include "wedgetact/scene.hpp"
#include "wedgetact/segment.hpp"
#include "wedgetact/trace.hpp"

namespace wedgetact {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MediumType { Liquid, Semiliquid, Film, Rigid };

/// Desk-scale stand-in for the physical scene under the sensor: a lateral
/// height field plus a penetration-to-coverage law. Coverage grows
/// monotonically with penetration depth for liquid and semiliquid media.
struct ContactWorld {
  MediumType medium = MediumType::Liquid;
  bool has_surface = true;
  double surface_height = 0.0;  // mm
  double wet_depth = 2.0;       // full coverage at this penetration
  double spread_rate = 0.0015;  // mm of height removed per contacting step
  double object_width = 20.0;   // grasped object, mm
  Rgb contact_albedo{0.85, 0.90, 0.95};
  double workspace_min_x = -50.0, workspace_max_x = 50.0;
  double workspace_min_z = -5.0, workspace_max_z = 100.0;

  std::vector<double> height_offsets;  // lateral modulation bins (empty = flat)

  double height_at(double x) const;
  void lower_height(double x, double amount);
  /// Ground-truth coverage fraction with the sensor bottom at (x, z).
  double coverage_at(double x, double z) const;
  /// Coverage-matched contact patch, centered on the sensing span.
  ContactSpec contact_at(double x, double z, const OpticalConfig& cfg) const;
};

ContactWorld load_world(const std::string& path);

struct EndEffectorState {
  std::array<double, 3> position{0.0, 0.0, 30.0};  // x, y, z in mm
  std::array<double, 3> velocity{0.0, 0.0, 0.0};   // mm/s
  double gripper_aperture = 30.0;                  // mm
};

struct PDGains {
  double kp = 2.0;              // mm of height command per unit coverage error
  double kd = 0.5;              // mm per unit coverage-error rate (per step)
  double target_coverage = 0.5;
  double control_rate = 30.0;   // Hz
};

/// Height regulation toward target coverage while sweeping laterally.
/// Descends when under target; the height command is clamped per step.
class SpreadController {
 public:
  explicit SpreadController(PDGains gains) : gains_(gains) {}

  EndEffectorState step(const ContactWorld& world, const EndEffectorState& state,
                        double observed_coverage);

  double sweep_speed = 15.0;  // mm/s, reverses at the workspace bounds
  double max_step = 1.0;      // mm per step height clamp

 private:
  PDGains gains_;
  std::optional<double> prev_error_;
  double sweep_dir_ = 1.0;
};

struct StepResult {
  EndEffectorState state;
  bool done = false;
};

/// Two-speed descent: fast while no contact, slow in partial contact, done
/// once coverage exceeds stop_coverage. Throws SimError at the travel limit.
StepResult step_dip(const ContactWorld& world, const EndEffectorState& state,
                    double approach_speed_fast, double approach_speed_slow, double stop_coverage,
                    double observed_coverage, double control_rate = 30.0);

/// Thin-film policy: contact on the right sensor commands +x, on the left
/// -x, none returns proportionally toward center, both holds position.
/// Pure in (left_contact, right_contact, state.position.x).
EndEffectorState step_film(bool left_contact, bool right_contact, const EndEffectorState& state,
                           double film_speed = 10.0, double return_gain = 2.0,
                           double control_rate = 30.0);

struct GraspStep {
  double aperture = 0.0;
  bool done = false;
};

/// Closes by close_speed per step until pixel_count exceeds stop_pixels.
/// Throws SimError("grasp failed") when the aperture reaches zero first.
GraspStep step_grasp(std::size_t pixel_count, double aperture, double close_speed,
                     std::size_t stop_pixels);

enum class ObservationMode { GroundTruth, Rendered };

/// The rendered-observation sensing chain: world contact -> render ->
/// segmentation against a 10-frame reference -> coverage statistics.
class SensorSim {
 public:
  SensorSim(const OpticalConfig& cfg, StreamSeed seed, int height = 24, int width = 120,
            std::uint64_t rays = 20000);

  struct Observation {
    double coverage = 0.0;
    std::size_t pixel_count = 0;
  };
  Observation observe(const ContactSpec& contact, int step);

  int height() const { return height_; }
  int width() const { return width_; }

 private:
  Scene2D scene_;
  StreamSeed seed_;
  int height_, width_;
  std::uint64_t rays_;
  double exposure_ = 1.0;
  ReferenceState reference_;
  Thresholds thresholds_;
};

struct SimLogRow {
  int step = 0;
  double x = 0.0, z = 0.0;
  double coverage = 0.0;
  double command = 0.0;  // height/aperture/lateral command this step
  std::size_t pixel_count = 0;
};

struct SimResult {
  std::vector<SimLogRow> log;
  bool done = false;
  std::string outcome;
};

SimResult run_spread(ContactWorld world, const OpticalConfig& cfg, const PDGains& gains,
                     int steps, ObservationMode mode, StreamSeed seed);
SimResult run_dip(const ContactWorld& world, const OpticalConfig& cfg, double fast, double slow,
                  double stop_coverage, int max_steps, ObservationMode mode, StreamSeed seed);
SimResult run_grasp(const ContactWorld& world, const OpticalConfig& cfg, double close_speed,
                    std::size_t stop_pixels, int max_steps, ObservationMode mode,
                    StreamSeed seed);
/// Scripted film touches: per-step (left, right) contact flags.
SimResult run_film(const std::vector<std::pair<bool, bool>>& script, int steps);

void write_sim_log_csv(const std::string& path, const SimResult& result);

}  // namespace wedgetact
