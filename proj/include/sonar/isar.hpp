#pragma once
/**
 * @file isar.hpp
 * @brief Time-domain backprojection into a frame rotating with the rotor.
 *
 * Every pixel is a point fixed to the rotor. For each pulse the pixel is
 * carried into the world frame with the assumed rotation, its round-trip
 * delay from the sensor selects a fast-time position, and the envelope
 * (analytic-signal magnitude) of that pulse is accumulated noncoherently.
 */

#include <cstddef>
#include <vector>

#include "sonar/geometry.hpp"
#include "sonar/matrix.hpp"
#include "sonar/pulsegrid.hpp"
#include "sonar/scene.hpp"

namespace sonar {

struct IsarImage {
  Matrix pixels;  // row 0 is the top (+y); center pixel is the fan center
  double extent_m{0.0};  // half-width
  double pixel_pitch_m{0.0};
  double assumed_rate_hz{0.0};

  std::size_t side() const { return pixels.rows(); }
  /// Offset from the fan center (rotating frame) of pixel (row, col).
  Vec2 pixel_offset(std::size_t row, std::size_t col) const;
  /// Bilinear sample at a rotating-frame offset; zero outside the image.
  double sample(const Vec2& offset) const;
};

struct BackprojectOptions {
  double initial_angle_rad{0.0};  // frame orientation at the first pulse
};

/// Throws InvalidArgument for a zero rate or an even/zero pixel count, and
/// DelayOutOfGate when the fan center's delay misses the retained rows.
IsarImage backproject(const PulseMatrix& m, const Scene& scene, double assumed_rate_hz, double extent_m,
                      std::size_t pixels_per_side, BackprojectOptions options = {});

/// Peak zero-mean normalized cross-correlation between `a` and `b` rotated
/// about the center, over the inscribed disk, for rotations in [0, 360) deg.
/// Clamped to [0, 1].
double rotation_search_correlation(const Matrix& a, const Matrix& b, double step_deg = 0.5);

/// Forms +rate and -rate images and returns their rotation-search correlation.
double direction_ambiguity_check(const PulseMatrix& m, const Scene& scene, double rate_hz, double extent_m,
                                 std::size_t pixels_per_side, double step_deg = 0.5);

/// Absolute fast-time sample at hub range plus half a blade length. Truncating
/// there keeps the direct blade echoes and drops every wall-bounce path of a
/// room whose multipath band starts beyond it.
std::size_t direct_only_far_gate(const Scene& scene, const WaveformConfig& wf);

/// Image values along a circle of `radius_m` about the center, `samples` points from angle 0 (+x) CCW.
std::vector<double> angular_profile(const IsarImage& img, double radius_m, std::size_t samples = 720);

}  // namespace sonar
