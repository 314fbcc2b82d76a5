#pragma once
/**
 * @file scene.hpp
 * @brief Room, rotor and waveform description plus the blade kinematics.
 *
 * A Scene is a planar room bounded by reflecting walls, a monostatic sensor and
 * a K-bladed rotor. The rotor angle is the single circle-valued coordinate that
 * parametrizes the whole configuration; RotationModel maps time onto it.
 *
 * Config files are plain `key=value` text, one key per line, `#` comments.
 */

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "sonar/geometry.hpp"

namespace sonar {

using Wall = Segment;

struct Scene {
  std::vector<Wall> walls;
  Vec2 sensor_pos;
  Vec2 fan_center;
  int blade_count{4};
  double blade_length{0.58};
  double blade_pitch_deg{15.0};  // carried for config fidelity; the simulator is planar
  double wall_reflectivity{0.5};
  double blade_reflectivity{1.0};
  double sound_speed{343.0};
  bool spreading_loss{false};  // scale echo amplitudes by 1/path_length

  /// Throws SonarError(Config) naming the violated invariant.
  void validate() const;
};

/// Signed rate: positive is counterclockwise.
struct RotationModel {
  double rate_hz{0.0};
  double initial_angle_rad{0.0};

  /// (initial + 2*pi*rate*t) reduced into [0, 2*pi).
  double angle_at(double t) const;
};

struct WaveformConfig {
  double prf_hz{34.0};
  double sample_rate_hz{44100.0};
  std::size_t pulse_count{175};
  std::size_t impulse_len_samples{8};

  double pri_samples() const { return sample_rate_hz / prf_hz; }
  /// Transmit impulse: a half-cosine decay starting at its peak, so the
  /// leading edge sits on the first sample.
  std::vector<double> impulse_shape() const;
  void validate() const;
};

/// Everything a config file describes.
struct SceneConfig {
  Scene scene;
  RotationModel rotation;
  WaveformConfig waveform;
};

/// Reduces an angle into [0, 2*pi).
double wrap_angle(double radians);

double angle_at(const RotationModel& rot, double t);

/// K segments from the fan center; segment k points along angle_at(t) + 2*pi*k/K.
std::vector<Segment> blade_segments(const Scene& scene, const RotationModel& rot, double t);

/// True when p lies strictly inside the closed polygon traced by the walls.
bool strictly_inside(const std::vector<Wall>& walls, const Vec2& p);

/// The shipped room: sensor 2.16 m from the rotor hub, every single-bounce
/// blade path between 2.5 m and 4.0 m. Matches config/default_scene.cfg.
SceneConfig default_config();

SceneConfig parse_config(std::istream& in);
SceneConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const SceneConfig& cfg);

}  // namespace sonar
