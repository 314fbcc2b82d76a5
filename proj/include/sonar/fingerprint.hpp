#pragma once
/**
 * @file fingerprint.hpp
 * @brief Multipath angular fingerprinting.
 *
 * One blade-pass period of gated pulses from a reference collection serves as
 * a lookup table of rotor angle. Each pulse of a second collection is matched
 * to its nearest reference pulse (Euclidean norm over the gated samples), and
 * the resulting index sequence is unwrapped and smoothed with a slew-limited
 * constant-velocity Kalman filter. The slope of that trajectory is the rate
 * ratio between the two collections; its sign is the relative direction.
 */

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sonar/matrix.hpp"
#include "sonar/pulsegrid.hpp"
#include "sonar/scene.hpp"

namespace sonar {

struct ReferenceBlock {
  PulseMatrix pulses;  // gated, round(period_pulses) columns
  double period_pulses{0.0};
  std::size_t start_pulse{0};
};

struct MatchTrace {
  std::vector<std::size_t> raw_match;  // argmin per second-collection pulse, lowest index on ties
  Matrix distance_matrix;  // second pulses x reference pulses
};

enum class Verdict { same_direction, opposite_direction, indeterminate };

const char* to_string(Verdict v);

struct AngularFingerprint {
  std::vector<double> filtered;  // unwrapped reference coordinate, in reference pulses
  double slope{0.0};
  Verdict verdict{Verdict::indeterminate};
};

struct SmoothOptions {
  double slew_limit{4.0};
  double process_noise{0.1};
  double measurement_noise{1.0};
  double pri_ratio{1.0};  // second-collection PRI over reference PRI
  double epsilon{0.1};
};

struct ProfileDiagnostics {
  double repeatability{0.0};
  double injectivity_margin{0.0};
};

/// Keeps absolute fast-time samples from `gate_sample` on. Throws GateExceedsMatrix
/// when the matrix already starts later or the gate leaves no rows.
PulseMatrix apply_gate(const PulseMatrix& m, std::size_t gate_sample);

/// Gate for simulated data: everything before the hub's fast-time bin minus 5 samples.
std::size_t default_simulation_gate(const Scene& scene, const WaveformConfig& wf);

/// Fast-time bin of the rotor hub, used as the period-estimation range.
std::size_t target_range_bin(const Scene& scene, const WaveformConfig& wf);

/// Estimates the period from the strongest doppler line at `target_bin`
/// (absolute fast-time sample) and stores round(period) pulses from `start_pulse`,
/// gated at `gate_sample`. Propagates NoDopplerPeak; throws InsufficientSamples
/// when fewer than two periods are available.
ReferenceBlock build_reference(const PulseMatrix& m, std::size_t target_bin, std::size_t gate_sample,
                               std::size_t start_pulse = 0);

/// Throws GateMismatch unless `second` has the reference's gate and row count.
MatchTrace match(const ReferenceBlock& ref, const PulseMatrix& second);

AngularFingerprint smooth(const MatchTrace& trace, double period_pulses, const SmoothOptions& options = {});

Verdict verdict(double slope, double epsilon = 0.1);

/// `full` must carry the reference gate and span at least two periods.
ProfileDiagnostics profile_diagnostics(const ReferenceBlock& ref, const PulseMatrix& full, std::size_t min_separation = 2);

/// `pulse,raw_match,filtered`
void write_fingerprint_csv(std::ostream& out, const MatchTrace& trace, const AngularFingerprint& fp);

/// `{"slope": <v>, "verdict": "<v>"}` without a trailing newline.
void write_verdict_line(std::ostream& out, const AngularFingerprint& fp);

}  // namespace sonar
