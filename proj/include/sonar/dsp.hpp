#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sonar::dsp {

using Complex = std::complex<double>;

/// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-2*pi*i*k*n/N).
std::vector<Complex> forward_dft(std::span<const Complex> x);
std::vector<Complex> forward_dft_real(std::span<const double> x);

/// Inverse DFT including the 1/N factor.
std::vector<Complex> inverse_dft(std::span<const Complex> X);

/// Magnitude of the analytic signal (frequency-domain Hilbert transformer).
std::vector<double> analytic_envelope(std::span<const double> x);

/// |sum_n x[n] exp(-2*pi*i*bin*n/N)| evaluated at a fractional bin.
double dtft_magnitude(std::span<const Complex> x, double bin);

double median(std::vector<double> values);

}  // namespace sonar::dsp
