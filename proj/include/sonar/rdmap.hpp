#pragma once
/**
 * @file rdmap.hpp
 * @brief Range-doppler maps: an unnormalized DFT along the pulse axis of every
 * range row, rotated so zero doppler sits at column floor(P/2).
 *
 * Parseval under this convention: sum_k |X[k]|^2 = P * sum_n |x[n]|^2 per row.
 */

#include <complex>
#include <cstddef>
#include <vector>

#include "sonar/matrix.hpp"
#include "sonar/pulsegrid.hpp"

namespace sonar {

struct RangeDopplerMap {
  Matrix magnitude;  // rows = range bins, cols = doppler bins (zero doppler centered)
  std::vector<std::complex<double>> spectrum;  // same layout as magnitude, complex
  double doppler_bin_hz{0.0};  // prf / pulse_count
  double sample_rate_hz{0.0};
  double prf_hz{0.0};
  std::size_t gate_start_sample{0};

  std::size_t rows() const { return magnitude.rows(); }
  std::size_t cols() const { return magnitude.cols(); }
  std::size_t center_column() const { return cols() / 2; }
  /// Signed doppler frequency of a (possibly fractional) column.
  double doppler_hz(double column) const { return (column - static_cast<double>(center_column())) * doppler_bin_hz; }
  std::complex<double> value(std::size_t row, std::size_t col) const { return spectrum[row * cols() + col]; }
};

struct RangeDopplerOptions {
  bool hann_window{false};  // off: the map is the plain DFT
};

RangeDopplerMap range_doppler(const PulseMatrix& m, RangeDopplerOptions options = {});

/// Signed frequency (Hz) of the strongest non-DC line in `range_bin` (a row of
/// the map). The column search excludes DC +-1 bin; the winning column is then
/// refined to sub-bin precision on the row's DTFT within +-1 bin (mean removed,
/// Hann taper applied for the refinement only).
/// Throws NoDopplerPeak when that line is weaker than min_rel_peak times the
/// row median, or is numerically zero next to the DC term (static target).
double doppler_peak_at_range(const RangeDopplerMap& rd, std::size_t range_bin, double min_rel_peak = 6.0);

/// Export view of the magnitudes (gate and rates carried through).
PulseMatrix magnitude_matrix(const RangeDopplerMap& rd);

}  // namespace sonar
