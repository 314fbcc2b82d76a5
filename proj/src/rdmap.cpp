#include "sonar/rdmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sonar/dsp.hpp"
#include "sonar/errors.hpp"

namespace sonar {

RangeDopplerMap range_doppler(const PulseMatrix& m, RangeDopplerOptions options) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (cols < 2) throw SonarError(ErrorKind::InvalidArgument, "range-doppler needs at least 2 pulses");

  RangeDopplerMap rd;
  rd.magnitude = Matrix(rows, cols);
  rd.spectrum.assign(rows * cols, {0.0, 0.0});
  rd.doppler_bin_hz = m.prf_hz / static_cast<double>(cols);
  rd.sample_rate_hz = m.sample_rate_hz;
  rd.prf_hz = m.prf_hz;
  rd.gate_start_sample = m.gate_start_sample;

  std::vector<double> window(cols, 1.0);
  if (options.hann_window) {
    for (std::size_t n = 0; n < cols; ++n) {
      window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(cols));
    }
  }

  const std::size_t center = cols / 2;
  std::vector<double> row(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto src = m.data.row(r);
    for (std::size_t n = 0; n < cols; ++n) row[n] = src[n] * window[n];
    const auto X = dsp::forward_dft_real(row);
    for (std::size_t k = 0; k < cols; ++k) {
      const std::size_t col = (k + center) % cols;
      rd.spectrum[r * cols + col] = X[k];
      rd.magnitude(r, col) = std::abs(X[k]);
    }
  }
  return rd;
}

double doppler_peak_at_range(const RangeDopplerMap& rd, std::size_t range_bin, double min_rel_peak) {
  if (range_bin >= rd.rows()) {
    throw SonarError(ErrorKind::InvalidArgument, "range bin " + std::to_string(range_bin) + " outside the map");
  }
  const std::size_t cols = rd.cols();
  const std::size_t center = rd.center_column();
  const auto mags = rd.magnitude.row(range_bin);

  std::size_t best = cols;
  double best_mag = -1.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const auto offset = static_cast<long long>(c) - static_cast<long long>(center);
    if (std::llabs(offset) <= 1) continue;
    if (mags[c] > best_mag) {
      best_mag = mags[c];
      best = c;
    }
  }
  if (best == cols) throw SonarError(ErrorKind::NoDopplerPeak, "too few pulses for a doppler search");

  const double row_median = dsp::median({mags.begin(), mags.end()});
  const double row_max = *std::max_element(mags.begin(), mags.end());
  if (best_mag < min_rel_peak * row_median || best_mag <= 1e-9 * row_max) {
    throw SonarError(ErrorKind::NoDopplerPeak, "no doppler line at range bin " + std::to_string(range_bin) +
                                                   " (static target?)");
  }

  // Back to the pulse domain for a DTFT search between the neighbouring bins.
  std::vector<dsp::Complex> natural(cols);
  for (std::size_t c = 0; c < cols; ++c) natural[(c + cols - center) % cols] = rd.value(range_bin, c);
  // Drop the stationary part and taper, so neither the DC term nor other
  // harmonics of the blade-pass line pull the refined peak.
  natural[0] = 0.0;
  auto pulses = dsp::inverse_dft(natural);
  for (std::size_t n = 0; n < cols; ++n) {
    pulses[n] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(n) + 0.5) / static_cast<double>(cols));
  }

  const double coarse = static_cast<double>(best) - static_cast<double>(center);
  constexpr int kSteps = 256;
  double refined = coarse;
  double refined_mag = -1.0;
  for (int i = -kSteps; i <= kSteps; ++i) {
    const double bin = coarse + static_cast<double>(i) / kSteps;
    const double mag = dsp::dtft_magnitude(pulses, bin);
    if (mag > refined_mag) {
      refined_mag = mag;
      refined = bin;
    }
  }
  return refined * rd.doppler_bin_hz;
}

PulseMatrix magnitude_matrix(const RangeDopplerMap& rd) {
  PulseMatrix out;
  out.data = rd.magnitude;
  out.sample_rate_hz = rd.sample_rate_hz;
  out.prf_hz = rd.prf_hz;
  out.gate_start_sample = rd.gate_start_sample;
  return out;
}

}  // namespace sonar
