#pragma once
/**
 * @file io.hpp
 * @brief File formats: mono WAV, PDMX matrices and log-scaled PGM images.
 *
 * PDMX layout (little endian):
 *   "PDMX" | u16 version=1 | u32 rows | u32 cols | u32 gate_start_sample |
 *   f64 sample_rate | f64 prf | rows*cols f64, row-major
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sonar/matrix.hpp"
#include "sonar/pulsegrid.hpp"

namespace sonar::io {

struct WavData {
  std::vector<double> samples;  // scaled to [-1, 1] for PCM16
  double sample_rate_hz{0.0};
};

enum class WavEncoding { pcm16, float32 };

WavData read_wav(std::istream& in);
WavData read_wav(const std::filesystem::path& path);
void write_wav(std::ostream& out, const WavData& wav, WavEncoding encoding = WavEncoding::float32);
void write_wav(const std::filesystem::path& path, const WavData& wav, WavEncoding encoding = WavEncoding::float32);

/// Reads a recording and checks its rate against the configuration (SampleRateMismatch).
std::vector<double> read_recording(const std::filesystem::path& path, double expected_sample_rate_hz);

void write_pdmx(std::ostream& out, const PulseMatrix& m);
void write_pdmx(const std::filesystem::path& path, const PulseMatrix& m);
PulseMatrix read_pdmx(std::istream& in);
PulseMatrix read_pdmx(const std::filesystem::path& path);

/// 8-bit binary PGM with pixel = 255 * log10(1 + v) / log10(1 + max). Values must be >= 0.
std::vector<std::uint8_t> log_scale_pixels(const Matrix& m);
void write_pgm(std::ostream& out, const Matrix& m);
void write_pgm(const std::filesystem::path& path, const Matrix& m);

}  // namespace sonar::io
