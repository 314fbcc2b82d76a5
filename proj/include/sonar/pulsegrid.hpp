#pragma once
/**
 * @file pulsegrid.hpp
 * @brief Contiguous recording -> fast-time x slow-time pulse matrix.
 *
 * Rows are samples within a pulse repetition interval, columns are pulses.
 * Ranges use the two-way monostatic convention r = c*n/(2*fs); gates are
 * always expressed in samples.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "sonar/matrix.hpp"
#include "sonar/scene.hpp"

namespace sonar {

struct PulseMatrix {
  Matrix data;  // rows = fast time, cols = pulses
  double sample_rate_hz{0.0};
  double prf_hz{0.0};
  std::size_t gate_start_sample{0};  // absolute fast-time index of row 0

  std::size_t rows() const { return data.rows(); }
  std::size_t cols() const { return data.cols(); }
  std::vector<double> pulse(std::size_t col) const { return data.column(col); }
};

/// Smallest index n with |x[n]| >= threshold_frac * max|x|. Throws AllZeroSignal.
std::size_t detect_leading_edge(std::span<const double> samples, double threshold_frac = 0.5);

/// start + round(p * fs/prf): the fractional PRI is rounded per pulse, never accumulated.
std::size_t column_start(std::size_t start, std::size_t pulse, double sample_rate_hz, double prf_hz);

/// Throws InsufficientSamplesError (with the count of complete pulses) when the
/// recording cannot hold wf.pulse_count pulses.
PulseMatrix form_matrix(std::span<const double> samples, std::size_t start, const WaveformConfig& wf);

/// Keeps rows [first_kept_sample, rows); gate_start_sample accumulates.
PulseMatrix range_gate(const PulseMatrix& m, std::size_t first_kept_sample);

/// Drops rows at and beyond absolute fast-time sample `end_sample` (a far gate).
PulseMatrix truncate_range(const PulseMatrix& m, std::size_t end_sample);

double sample_to_range(double n, double sample_rate_hz, double sound_speed);
std::size_t range_to_sample(double range_m, double sample_rate_hz, double sound_speed);

}  // namespace sonar
