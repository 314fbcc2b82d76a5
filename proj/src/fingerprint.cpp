#include "sonar/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "sonar/dsp.hpp"
#include "sonar/errors.hpp"
#include "sonar/rdmap.hpp"

namespace sonar {
namespace {

double column_distance(const Matrix& a, std::size_t ca, const Matrix& b, std::size_t cb) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double d = a(r, ca) - b(r, cb);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double column_norm(const Matrix& a, std::size_t c) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) sum += a(r, c) * a(r, c);
  return std::sqrt(sum);
}

void require_same_gate(const PulseMatrix& ref, const PulseMatrix& other) {
  if (ref.gate_start_sample != other.gate_start_sample || ref.rows() != other.rows()) {
    throw SonarError(ErrorKind::GateMismatch,
                     "reference is gated at sample " + std::to_string(ref.gate_start_sample) + " with " +
                         std::to_string(ref.rows()) + " rows, other collection at " +
                         std::to_string(other.gate_start_sample) + " with " + std::to_string(other.rows()));
  }
}

double least_squares_slope(const std::vector<double>& y, std::size_t first) {
  const std::size_t n = y.size() - first;
  if (n < 2) return 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t j = first; j < y.size(); ++j) {
    mean_x += static_cast<double>(j);
    mean_y += y[j];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t j = first; j < y.size(); ++j) {
    const double dx = static_cast<double>(j) - mean_x;
    sxy += dx * (y[j] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::same_direction: return "same_direction";
    case Verdict::opposite_direction: return "opposite_direction";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

PulseMatrix apply_gate(const PulseMatrix& m, std::size_t gate_sample) {
  if (gate_sample < m.gate_start_sample) {
    throw SonarError(ErrorKind::GateExceedsMatrix, "matrix already starts at sample " +
                                                       std::to_string(m.gate_start_sample) + ", cannot gate at " +
                                                       std::to_string(gate_sample));
  }
  return range_gate(m, gate_sample - m.gate_start_sample);
}

std::size_t target_range_bin(const Scene& scene, const WaveformConfig& wf) {
  return range_to_sample(distance(scene.sensor_pos, scene.fan_center), wf.sample_rate_hz, scene.sound_speed);
}

std::size_t default_simulation_gate(const Scene& scene, const WaveformConfig& wf) {
  const std::size_t bin = target_range_bin(scene, wf);
  return bin > 5 ? bin - 5 : 0;
}

ReferenceBlock build_reference(const PulseMatrix& m, std::size_t target_bin, std::size_t gate_sample,
                               std::size_t start_pulse) {
  if (target_bin < m.gate_start_sample || target_bin >= m.gate_start_sample + m.rows()) {
    throw SonarError(ErrorKind::InvalidArgument, "target bin " + std::to_string(target_bin) + " is not in the matrix");
  }
  // Rows transform independently, so only the target row is needed.
  PulseMatrix row;
  row.sample_rate_hz = m.sample_rate_hz;
  row.prf_hz = m.prf_hz;
  row.gate_start_sample = target_bin;
  row.data = Matrix(1, m.cols());
  const auto src = m.data.row(target_bin - m.gate_start_sample);
  std::copy(src.begin(), src.end(), row.data.row(0).begin());
  const double doppler = doppler_peak_at_range(range_doppler(row), 0);

  ReferenceBlock ref;
  ref.period_pulses = m.prf_hz / std::abs(doppler);
  ref.start_pulse = start_pulse;
  const auto stored = static_cast<std::size_t>(std::llround(ref.period_pulses));
  const std::size_t available = m.cols() > start_pulse ? m.cols() - start_pulse : 0;
  if (static_cast<double>(available) < 2.0 * ref.period_pulses) {
    throw InsufficientSamplesError(available, "reference needs two periods (" +
                                                  std::to_string(2.0 * ref.period_pulses) + " pulses) after pulse " +
                                                  std::to_string(start_pulse) + ", have " + std::to_string(available));
  }

  const PulseMatrix gated = apply_gate(m, gate_sample);
  ref.pulses = gated;
  ref.pulses.data = Matrix(gated.rows(), stored);
  for (std::size_t r = 0; r < gated.rows(); ++r) {
    for (std::size_t c = 0; c < stored; ++c) ref.pulses.data(r, c) = gated.data(r, start_pulse + c);
  }
  return ref;
}

MatchTrace match(const ReferenceBlock& ref, const PulseMatrix& second) {
  require_same_gate(ref.pulses, second);
  const std::size_t n_ref = ref.pulses.cols();
  MatchTrace trace;
  trace.distance_matrix = Matrix(second.cols(), n_ref);
  trace.raw_match.resize(second.cols());
  for (std::size_t j = 0; j < second.cols(); ++j) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_ref; ++i) {
      const double d = column_distance(second.data, j, ref.pulses.data, i);
      trace.distance_matrix(j, i) = d;
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    trace.raw_match[j] = best;
  }
  return trace;
}

AngularFingerprint smooth(const MatchTrace& trace, double period_pulses, const SmoothOptions& options) {
  if (!(options.slew_limit > 0.0)) throw SonarError(ErrorKind::InvalidArgument, "slew limit must be > 0");
  if (!(period_pulses > 0.0)) throw SonarError(ErrorKind::InvalidArgument, "period must be > 0");
  AngularFingerprint fp;
  const auto& raw = trace.raw_match;
  if (raw.empty()) return fp;

  // Constant-velocity model, F = [[1,1],[0,1]], white-acceleration process noise.
  const double q = options.process_noise;
  const double r = options.measurement_noise;
  double x0 = static_cast<double>(raw[0]);
  double x1 = 0.0;
  double p00 = 1e3, p01 = 0.0, p11 = 1e3;
  fp.filtered.reserve(raw.size());
  fp.filtered.push_back(x0);
  for (std::size_t j = 1; j < raw.size(); ++j) {
    const double xp0 = x0 + x1;
    const double xp1 = x1;
    const double pp00 = p00 + 2.0 * p01 + p11 + 0.25 * q;
    const double pp01 = p01 + p11 + 0.5 * q;
    const double pp11 = p11 + q;

    const double m = static_cast<double>(raw[j]);
    const double z = m + period_pulses * std::round((xp0 - m) / period_pulses);

    const double s = pp00 + r;
    const double k0 = pp00 / s;
    const double k1 = pp01 / s;
    const double innovation = z - xp0;
    x0 = xp0 + k0 * innovation;
    x1 = xp1 + k1 * innovation;
    p00 = (1.0 - k0) * pp00;
    p01 = (1.0 - k0) * pp01;
    p11 = pp11 - k1 * pp01;

    const double prev = fp.filtered.back();
    x0 = prev + std::clamp(x0 - prev, -options.slew_limit, options.slew_limit);
    fp.filtered.push_back(x0);
  }

  // Skip the burn-in period unless that would leave fewer than two points.
  auto burn_in = static_cast<std::size_t>(std::ceil(period_pulses));
  if (burn_in + 2 > fp.filtered.size()) burn_in = 0;
  fp.slope = least_squares_slope(fp.filtered, burn_in) / options.pri_ratio;
  fp.verdict = verdict(fp.slope, options.epsilon);
  return fp;
}

Verdict verdict(double slope, double epsilon) {
  if (!(epsilon > 0.0)) throw SonarError(ErrorKind::InvalidArgument, "epsilon must be > 0");
  if (slope > epsilon) return Verdict::same_direction;
  if (slope < -epsilon) return Verdict::opposite_direction;
  return Verdict::indeterminate;
}

ProfileDiagnostics profile_diagnostics(const ReferenceBlock& ref, const PulseMatrix& full, std::size_t min_separation) {
  require_same_gate(ref.pulses, full);
  const double period = ref.period_pulses;
  if (static_cast<double>(full.cols()) < 2.0 * period) {
    throw InsufficientSamplesError(full.cols(), "diagnostics need two periods");
  }
  const auto shift = static_cast<std::size_t>(std::llround(period));
  ProfileDiagnostics out;

  std::vector<double> pair_distances;
  std::vector<double> norms;
  for (std::size_t j = 0; j < full.cols(); ++j) {
    norms.push_back(column_norm(full.data, j));
    if (j + shift < full.cols()) pair_distances.push_back(column_distance(full.data, j, full.data, j + shift));
  }
  const double norm_median = dsp::median(norms);
  out.repeatability = norm_median > 0.0 ? dsp::median(pair_distances) / norm_median : 0.0;

  const std::size_t n = ref.pulses.cols();
  double min_far = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t sep = std::min(j - i, n - (j - i));
      if (sep > min_separation) min_far = std::min(min_far, column_distance(ref.pulses.data, i, ref.pulses.data, j));
    }
  }
  double max_same = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1;; ++k) {
      const auto col = static_cast<std::size_t>(
          std::llround(static_cast<double>(ref.start_pulse + i) + static_cast<double>(k) * period));
      if (col >= full.cols()) break;
      max_same = std::max(max_same, column_distance(ref.pulses.data, i, full.data, col));
    }
  }
  if (!std::isfinite(min_far)) min_far = 0.0;
  out.injectivity_margin = max_same > 0.0 ? min_far / max_same : std::numeric_limits<double>::infinity();
  return out;
}

void write_fingerprint_csv(std::ostream& out, const MatchTrace& trace, const AngularFingerprint& fp) {
  out << "pulse,raw_match,filtered\n";
  const auto old_precision = out.precision(17);
  for (std::size_t j = 0; j < trace.raw_match.size(); ++j) {
    out << j << ',' << trace.raw_match[j] << ',' << (j < fp.filtered.size() ? fp.filtered[j] : 0.0) << '\n';
  }
  out.precision(old_precision);
}

void write_verdict_line(std::ostream& out, const AngularFingerprint& fp) {
  const auto old_precision = out.precision(6);
  out << "{\"slope\": " << fp.slope << ", \"verdict\": \"" << to_string(fp.verdict) << "\"}";
  out.precision(old_precision);
}

}  // namespace sonar
