#include "sonar/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace sonar::dsp {
namespace {

// FFTW's planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Complex> run_fft(std::span<const Complex> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<Complex> buf(in.begin(), in.end());
  if (n == 0) return buf;
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return buf;
}

}  // namespace

std::vector<Complex> forward_dft(std::span<const Complex> x) { return run_fft(x, FFTW_FORWARD); }

std::vector<Complex> forward_dft_real(std::span<const double> x) {
  std::vector<Complex> c(x.begin(), x.end());
  return forward_dft(c);
}

std::vector<Complex> inverse_dft(std::span<const Complex> X) {
  auto out = run_fft(X, FFTW_BACKWARD);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> analytic_envelope(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  auto spectrum = forward_dft_real(x);
  // Keep DC (and Nyquist for even n), double positive frequencies, drop negative ones.
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n) {
      spectrum[k] *= 2.0;
    } else if (2 * k > n) {
      spectrum[k] = 0.0;
    }
  }
  const auto analytic = inverse_dft(spectrum);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(analytic[i]);
  return env;
}

double dtft_magnitude(std::span<const Complex> x, double bin) {
  const double n = static_cast<double>(x.size());
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phase = -2.0 * std::numbers::pi * bin * static_cast<double>(i) / n;
    acc += x[i] * Complex(std::cos(phase), std::sin(phase));
  }
  return std::abs(acc);
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

}  // namespace sonar::dsp
