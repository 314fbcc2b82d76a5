#include "sonar/isar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sonar/dsp.hpp"
#include "sonar/errors.hpp"

namespace sonar {
namespace {

// Bilinear lookup in matrix coordinates (x = column, y = row); zero outside.
double bilinear(const Matrix& m, double x, double y) {
  if (x < 0.0 || y < 0.0) return 0.0;
  const auto c0 = static_cast<std::size_t>(x);
  const auto r0 = static_cast<std::size_t>(y);
  if (c0 >= m.cols() || r0 >= m.rows()) return 0.0;
  const double fx = x - static_cast<double>(c0);
  const double fy = y - static_cast<double>(r0);
  const std::size_t c1 = std::min(c0 + 1, m.cols() - 1);
  const std::size_t r1 = std::min(r0 + 1, m.rows() - 1);
  const double top = m(r0, c0) * (1.0 - fx) + m(r0, c1) * fx;
  const double bottom = m(r1, c0) * (1.0 - fx) + m(r1, c1) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

}  // namespace

Vec2 IsarImage::pixel_offset(std::size_t row, std::size_t col) const {
  const double center = static_cast<double>(side() - 1) / 2.0;
  return {(static_cast<double>(col) - center) * pixel_pitch_m, (center - static_cast<double>(row)) * pixel_pitch_m};
}

double IsarImage::sample(const Vec2& offset) const {
  const double center = static_cast<double>(side() - 1) / 2.0;
  return bilinear(pixels, center + offset.x / pixel_pitch_m, center - offset.y / pixel_pitch_m);
}

IsarImage backproject(const PulseMatrix& m, const Scene& scene, double assumed_rate_hz, double extent_m,
                      std::size_t pixels_per_side, BackprojectOptions options) {
  if (assumed_rate_hz == 0.0 || !std::isfinite(assumed_rate_hz)) {
    throw SonarError(ErrorKind::InvalidArgument, "backprojection needs a nonzero rotation rate");
  }
  if (pixels_per_side == 0 || pixels_per_side % 2 == 0) {
    throw SonarError(ErrorKind::InvalidArgument, "pixels per side must be odd");
  }
  if (!(extent_m > 0.0)) throw SonarError(ErrorKind::InvalidArgument, "extent must be > 0");

  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const double samples_per_meter = 2.0 * m.sample_rate_hz / scene.sound_speed;  // round trip
  const double gate = static_cast<double>(m.gate_start_sample);

  // Rotation fixed point: the center pixel maps to the same row for every pulse.
  const double center_row = distance(scene.fan_center, scene.sensor_pos) * samples_per_meter - gate;
  if (center_row < 0.0 || center_row > static_cast<double>(rows) - 1.0) {
    throw SonarError(ErrorKind::DelayOutOfGate, "fan center lies at fast-time row " + std::to_string(center_row) +
                                                    ", outside the " + std::to_string(rows) + " retained rows");
  }

  std::vector<std::vector<double>> envelopes(cols);
  for (std::size_t p = 0; p < cols; ++p) envelopes[p] = dsp::analytic_envelope(m.pulse(p));

  IsarImage img;
  img.extent_m = extent_m;
  img.pixel_pitch_m = pixels_per_side > 1 ? 2.0 * extent_m / static_cast<double>(pixels_per_side - 1) : extent_m;
  img.assumed_rate_hz = assumed_rate_hz;
  img.pixels = Matrix(pixels_per_side, pixels_per_side);

  const RotationModel rot{assumed_rate_hz, options.initial_angle_rad};
  const Vec2 hub_from_sensor = scene.fan_center - scene.sensor_pos;
  for (std::size_t p = 0; p < cols; ++p) {
    const double angle = rot.angle_at(static_cast<double>(p) / m.prf_hz);
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    const std::vector<double>& env = envelopes[p];
    for (std::size_t r = 0; r < pixels_per_side; ++r) {
      for (std::size_t c = 0; c < pixels_per_side; ++c) {
        const Vec2 q = img.pixel_offset(r, c);
        const Vec2 world{hub_from_sensor.x + ca * q.x - sa * q.y, hub_from_sensor.y + sa * q.x + ca * q.y};
        const double row = norm(world) * samples_per_meter - gate;
        if (row < 0.0 || row > static_cast<double>(rows) - 1.0) continue;
        const auto r0 = static_cast<std::size_t>(row);
        const double f = row - static_cast<double>(r0);
        const double v = r0 + 1 < rows ? env[r0] * (1.0 - f) + env[r0 + 1] * f : env[r0];
        img.pixels(r, c) += v;
      }
    }
  }
  return img;
}

double rotation_search_correlation(const Matrix& a, const Matrix& b, double step_deg) {
  if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw SonarError(ErrorKind::InvalidArgument, "rotation search needs equal square images");
  }
  if (!(step_deg > 0.0)) throw SonarError(ErrorKind::InvalidArgument, "rotation step must be > 0");
  const std::size_t n = a.rows();
  const double center = static_cast<double>(n - 1) / 2.0;
  const double radius2 = center * center;

  struct DiskPixel {
    double x, y, a;
  };
  std::vector<DiskPixel> disk;
  double mean_a = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double x = static_cast<double>(c) - center;
      const double y = center - static_cast<double>(r);
      if (x * x + y * y <= radius2) {
        disk.push_back({x, y, a(r, c)});
        mean_a += a(r, c);
      }
    }
  }
  if (disk.empty()) return 0.0;
  mean_a /= static_cast<double>(disk.size());
  double var_a = 0.0;
  for (auto& px : disk) {
    px.a -= mean_a;
    var_a += px.a * px.a;
  }

  double best = 0.0;
  const auto steps = static_cast<std::size_t>(std::ceil(360.0 / step_deg));
  std::vector<double> rotated(disk.size());
  for (std::size_t s = 0; s < steps; ++s) {
    const double theta = static_cast<double>(s) * step_deg * std::numbers::pi / 180.0;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    double mean_b = 0.0;
    for (std::size_t i = 0; i < disk.size(); ++i) {
      // b rotated by theta: value at p is b(R(-theta) p).
      const double bx = ct * disk[i].x + st * disk[i].y;
      const double by = -st * disk[i].x + ct * disk[i].y;
      rotated[i] = bilinear(b, center + bx, center - by);
      mean_b += rotated[i];
    }
    mean_b /= static_cast<double>(disk.size());
    double cov = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < disk.size(); ++i) {
      const double db = rotated[i] - mean_b;
      cov += disk[i].a * db;
      var_b += db * db;
    }
    if (var_a > 0.0 && var_b > 0.0) best = std::max(best, cov / std::sqrt(var_a * var_b));
  }
  return std::clamp(best, 0.0, 1.0);
}

double direction_ambiguity_check(const PulseMatrix& m, const Scene& scene, double rate_hz, double extent_m,
                                 std::size_t pixels_per_side, double step_deg) {
  const IsarImage forward = backproject(m, scene, std::abs(rate_hz), extent_m, pixels_per_side);
  const IsarImage reverse = backproject(m, scene, -std::abs(rate_hz), extent_m, pixels_per_side);
  return rotation_search_correlation(forward.pixels, reverse.pixels, step_deg);
}

std::size_t direct_only_far_gate(const Scene& scene, const WaveformConfig& wf) {
  const double range = distance(scene.sensor_pos, scene.fan_center) + 0.5 * scene.blade_length;
  return range_to_sample(range, wf.sample_rate_hz, scene.sound_speed);
}

std::vector<double> angular_profile(const IsarImage& img, double radius_m, std::size_t samples) {
  std::vector<double> profile(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    profile[i] = img.sample(unit_from_angle(theta) * radius_m);
  }
  return profile;
}

}  // namespace sonar
