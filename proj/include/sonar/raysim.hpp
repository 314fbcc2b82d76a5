#pragma once
/**
 * @file raysim.hpp
 * @brief Specular ray tracer and receive-signal synthesis for a rotating rotor.
 *
 * Blades are perfectly reflecting line segments frozen for the duration of a
 * pulse. Paths are the direct blade echo plus every path with exactly one
 * specular wall bounce; the latter are found with the image-source method
 * (sensor mirrored across the wall line). Blades and walls never occlude:
 * a path is shadowed only when its specular point falls off a segment.
 */

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sonar/geometry.hpp"
#include "sonar/scene.hpp"

namespace sonar {

enum class PathClass { direct, wall_then_blade, blade_then_wall };

const char* to_string(PathClass c);

struct EchoEvent {
  PathClass path_class{PathClass::direct};
  std::optional<int> wall_index;
  int blade_index{0};
  double delay{0.0};  // round trip, seconds
  double amplitude{0.0};
  double one_way_range{0.0};  // sound_speed * delay / 2
  Vec2 blade_point;  // specular point on the blade
  std::optional<Vec2> wall_point;
};

struct SimCollection {
  std::vector<double> samples;
  std::vector<std::vector<EchoEvent>> events_per_pulse;
};

/// Every specular path for blades frozen at angle_at(t_pulse). Empty when all are shadowed.
std::vector<EchoEvent> trace_pulse(const Scene& scene, const RotationModel& rot, double t_pulse);

/// Sample index at which pulse p is transmitted. The transmit waveform lives on
/// the sample grid, so starts are the exact fractional PRI rounded per pulse.
std::size_t pulse_start_sample(std::size_t pulse, const WaveformConfig& wf);

/// Receive-vector length that holds every pulse's full PRI window.
std::size_t collection_length(const WaveformConfig& wf);

/// Synthesizes the contiguous receive recording: a unit transmit impulse at every
/// pulse start plus every echo at start + delay*fs (linear interpolation deposit).
/// Throws EventDelayExceedsPRI when an echo would land beyond its own PRI.
SimCollection simulate_collection(const Scene& scene, const RotationModel& rot, const WaveformConfig& wf);

/// Per pulse, the sorted one-way ranges of the multipath (non-direct) events.
std::vector<std::vector<double>> multipath_range_timeseries(const SimCollection& sim);

/// CSV with header `pulse,class,wall,blade,delay_s,amplitude,range_m`.
void write_events_csv(std::ostream& out, const SimCollection& sim);

}  // namespace sonar
