#include "sonar/raysim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "sonar/errors.hpp"

namespace sonar {
namespace {

double path_amplitude(const Scene& scene, double base, double path_length) {
  return scene.spreading_loss ? base / path_length : base;
}

// Specular point on `mirror` for a ray from `src` to `rcv`. Both must sit
// strictly on the same side of the mirror line.
std::optional<Vec2> specular_point(const Vec2& src, const Vec2& rcv, const Segment& mirror) {
  const double s_src = side_of_line(src, mirror);
  const double s_rcv = side_of_line(rcv, mirror);
  if (s_src * s_rcv <= 0.0) return std::nullopt;
  const Vec2 rcv_image = reflect_across_line(rcv, mirror);
  const auto hit = intersect_lines(src, rcv_image, mirror);
  if (!hit || hit->u < 0.0 || hit->u > 1.0) return std::nullopt;
  return mirror.at(hit->u);
}

}  // namespace

const char* to_string(PathClass c) {
  switch (c) {
    case PathClass::direct: return "direct";
    case PathClass::wall_then_blade: return "wall_then_blade";
    case PathClass::blade_then_wall: return "blade_then_wall";
  }
  return "unknown";
}

std::vector<EchoEvent> trace_pulse(const Scene& scene, const RotationModel& rot, double t_pulse) {
  const Vec2 sensor = scene.sensor_pos;
  const double c = scene.sound_speed;
  const auto blades = blade_segments(scene, rot, t_pulse);

  std::vector<Vec2> images;
  images.reserve(scene.walls.size());
  for (const Wall& w : scene.walls) images.push_back(reflect_across_line(sensor, w));

  std::vector<EchoEvent> events;
  for (std::size_t k = 0; k < blades.size(); ++k) {
    const Segment& blade = blades[k];
    const int blade_index = static_cast<int>(k);

    // Direct: normal incidence at the perpendicular foot.
    const double u = projection_parameter(sensor, blade);
    if (u >= 0.0 && u <= 1.0) {
      const Vec2 foot = blade.at(u);
      const double path = 2.0 * distance(sensor, foot);
      if (path > 0.0) {
        EchoEvent e;
        e.path_class = PathClass::direct;
        e.blade_index = blade_index;
        e.delay = path / c;
        e.amplitude = path_amplitude(scene, scene.blade_reflectivity, path);
        e.one_way_range = path / 2.0;
        e.blade_point = foot;
        events.push_back(e);
      }
    }

    // One wall bounce: image source -> blade specular point -> sensor.
    for (std::size_t w = 0; w < scene.walls.size(); ++w) {
      const Vec2& image = images[w];
      const auto on_blade = specular_point(image, sensor, blade);
      if (!on_blade) continue;
      const auto wall_hit = intersect_lines(image, *on_blade, scene.walls[w]);
      if (!wall_hit || wall_hit->t <= 0.0 || wall_hit->t >= 1.0) continue;
      if (wall_hit->u < 0.0 || wall_hit->u > 1.0) continue;
      const Vec2 wall_point = scene.walls[w].at(wall_hit->u);
      const double path = distance(image, *on_blade) + distance(*on_blade, sensor);

      EchoEvent e;
      e.path_class = PathClass::wall_then_blade;
      e.wall_index = static_cast<int>(w);
      e.blade_index = blade_index;
      e.delay = path / c;
      e.amplitude = path_amplitude(scene, scene.blade_reflectivity * scene.wall_reflectivity, path);
      e.one_way_range = path / 2.0;
      e.blade_point = *on_blade;
      e.wall_point = wall_point;
      events.push_back(e);
      e.path_class = PathClass::blade_then_wall;
      events.push_back(e);
    }
  }
  return events;
}

std::size_t pulse_start_sample(std::size_t pulse, const WaveformConfig& wf) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(pulse) * wf.sample_rate_hz / wf.prf_hz));
}

std::size_t collection_length(const WaveformConfig& wf) {
  const auto rows = static_cast<std::size_t>(std::floor(wf.pri_samples()));
  return pulse_start_sample(wf.pulse_count - 1, wf) + rows;
}

SimCollection simulate_collection(const Scene& scene, const RotationModel& rot, const WaveformConfig& wf) {
  scene.validate();
  wf.validate();

  SimCollection sim;
  sim.samples.assign(collection_length(wf), 0.0);
  sim.events_per_pulse.reserve(wf.pulse_count);
  const std::vector<double> shape = wf.impulse_shape();
  const double pri_seconds = 1.0 / wf.prf_hz;

  auto deposit = [&](double position, double amplitude) {
    const double base = std::floor(position);
    const double frac = position - base;
    const auto first = static_cast<long long>(base);
    const auto n = static_cast<long long>(sim.samples.size());
    for (std::size_t k = 0; k < shape.size(); ++k) {
      const long long i = first + static_cast<long long>(k);
      const double v = amplitude * shape[k];
      if (i >= 0 && i < n) sim.samples[static_cast<std::size_t>(i)] += v * (1.0 - frac);
      if (frac > 0.0 && i + 1 >= 0 && i + 1 < n) sim.samples[static_cast<std::size_t>(i + 1)] += v * frac;
    }
  };

  for (std::size_t p = 0; p < wf.pulse_count; ++p) {
    const double t = static_cast<double>(p) / wf.prf_hz;
    auto events = trace_pulse(scene, rot, t);
    const double start = static_cast<double>(pulse_start_sample(p, wf));
    deposit(start, 1.0);
    for (const EchoEvent& e : events) {
      if (e.delay >= pri_seconds) {
        throw SonarError(ErrorKind::EventDelayExceedsPRI,
                         "pulse " + std::to_string(p) + " has an echo at " + std::to_string(e.delay) +
                             " s, beyond the " + std::to_string(pri_seconds) + " s PRI");
      }
      deposit(start + e.delay * wf.sample_rate_hz, e.amplitude);
    }
    sim.events_per_pulse.push_back(std::move(events));
  }
  return sim;
}

std::vector<std::vector<double>> multipath_range_timeseries(const SimCollection& sim) {
  std::vector<std::vector<double>> out;
  out.reserve(sim.events_per_pulse.size());
  for (const auto& events : sim.events_per_pulse) {
    std::vector<double> ranges;
    for (const EchoEvent& e : events) {
      if (e.path_class != PathClass::direct) ranges.push_back(e.one_way_range);
    }
    std::sort(ranges.begin(), ranges.end());
    out.push_back(std::move(ranges));
  }
  return out;
}

void write_events_csv(std::ostream& out, const SimCollection& sim) {
  out << "pulse,class,wall,blade,delay_s,amplitude,range_m\n";
  const auto old_precision = out.precision(17);
  for (std::size_t p = 0; p < sim.events_per_pulse.size(); ++p) {
    for (const EchoEvent& e : sim.events_per_pulse[p]) {
      out << p << ',' << to_string(e.path_class) << ',';
      if (e.wall_index) out << *e.wall_index;
      out << ',' << e.blade_index << ',' << e.delay << ',' << e.amplitude << ',' << e.one_way_range << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace sonar
