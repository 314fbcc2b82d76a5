#include "sonar/pulsegrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sonar/errors.hpp"

namespace sonar {

std::size_t detect_leading_edge(std::span<const double> samples, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0)) {
    throw SonarError(ErrorKind::InvalidArgument, "threshold_frac must lie in (0,1)");
  }
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw SonarError(ErrorKind::AllZeroSignal, "recording is all zeros");
  const double level = threshold_frac * peak;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    if (std::abs(samples[n]) >= level) return n;
  }
  return samples.size() - 1;  // unreachable: the peak itself crosses
}

std::size_t column_start(std::size_t start, std::size_t pulse, double sample_rate_hz, double prf_hz) {
  return start + static_cast<std::size_t>(std::llround(static_cast<double>(pulse) * sample_rate_hz / prf_hz));
}

PulseMatrix form_matrix(std::span<const double> samples, std::size_t start, const WaveformConfig& wf) {
  wf.validate();
  const auto rows = static_cast<std::size_t>(std::floor(wf.pri_samples()));

  std::size_t complete = 0;
  while (complete < wf.pulse_count &&
         column_start(start, complete, wf.sample_rate_hz, wf.prf_hz) + rows <= samples.size()) {
    ++complete;
  }
  if (complete < wf.pulse_count) {
    throw InsufficientSamplesError(complete, "recording holds " + std::to_string(complete) + " complete pulses, " +
                                                 std::to_string(wf.pulse_count) + " requested");
  }

  PulseMatrix m;
  m.data = Matrix(rows, wf.pulse_count);
  m.sample_rate_hz = wf.sample_rate_hz;
  m.prf_hz = wf.prf_hz;
  for (std::size_t p = 0; p < wf.pulse_count; ++p) {
    const std::size_t s0 = column_start(start, p, wf.sample_rate_hz, wf.prf_hz);
    for (std::size_t r = 0; r < rows; ++r) m.data(r, p) = samples[s0 + r];
  }
  return m;
}

PulseMatrix range_gate(const PulseMatrix& m, std::size_t first_kept_sample) {
  if (first_kept_sample >= m.rows()) {
    throw SonarError(ErrorKind::GateExceedsMatrix, "gate at row " + std::to_string(first_kept_sample) +
                                                       " leaves nothing of " + std::to_string(m.rows()) + " rows");
  }
  PulseMatrix out;
  out.sample_rate_hz = m.sample_rate_hz;
  out.prf_hz = m.prf_hz;
  out.gate_start_sample = m.gate_start_sample + first_kept_sample;
  out.data = Matrix(m.rows() - first_kept_sample, m.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const auto src = m.data.row(r + first_kept_sample);
    std::copy(src.begin(), src.end(), out.data.row(r).begin());
  }
  return out;
}

PulseMatrix truncate_range(const PulseMatrix& m, std::size_t end_sample) {
  if (end_sample <= m.gate_start_sample) {
    throw SonarError(ErrorKind::GateExceedsMatrix, "far gate lies before the first retained sample");
  }
  const std::size_t keep = std::min(m.rows(), end_sample - m.gate_start_sample);
  PulseMatrix out = m;
  out.data = Matrix(keep, m.cols());
  for (std::size_t r = 0; r < keep; ++r) {
    const auto src = m.data.row(r);
    std::copy(src.begin(), src.end(), out.data.row(r).begin());
  }
  return out;
}

double sample_to_range(double n, double sample_rate_hz, double sound_speed) {
  return sound_speed * n / (2.0 * sample_rate_hz);
}

std::size_t range_to_sample(double range_m, double sample_rate_hz, double sound_speed) {
  return static_cast<std::size_t>(std::llround(2.0 * range_m * sample_rate_hz / sound_speed));
}

}  // namespace sonar
