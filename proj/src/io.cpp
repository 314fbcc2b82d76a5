#include "sonar/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "sonar/errors.hpp"

namespace sonar::io {
namespace {

static_assert(std::endian::native == std::endian::little, "byte I/O below assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) {
    throw SonarError(ErrorKind::BadFile, std::string("truncated while reading ") + what);
  }
  return value;
}

std::array<char, 4> get_tag(std::istream& in, const char* what) {
  std::array<char, 4> tag{};
  if (!in.read(tag.data(), 4)) throw SonarError(ErrorKind::BadFile, std::string("truncated while reading ") + what);
  return tag;
}

bool tag_is(const std::array<char, 4>& tag, const char* expected) { return std::memcmp(tag.data(), expected, 4) == 0; }

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SonarError(ErrorKind::BadFile, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SonarError(ErrorKind::BadFile, "cannot write '" + path.string() + "'");
  return out;
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

WavData read_wav(std::istream& in) {
  if (!tag_is(get_tag(in, "RIFF header"), "RIFF")) throw SonarError(ErrorKind::BadFile, "not a RIFF file");
  get<std::uint32_t>(in, "RIFF size");
  if (!tag_is(get_tag(in, "WAVE tag"), "WAVE")) throw SonarError(ErrorKind::BadFile, "not a WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  while (true) {
    const auto id = get_tag(in, "chunk id");
    const auto size = get<std::uint32_t>(in, "chunk size");
    if (tag_is(id, "fmt ")) {
      if (size < 16) throw SonarError(ErrorKind::BadFile, "fmt chunk too short");
      format = get<std::uint16_t>(in, "format");
      channels = get<std::uint16_t>(in, "channels");
      rate = get<std::uint32_t>(in, "sample rate");
      get<std::uint32_t>(in, "byte rate");
      get<std::uint16_t>(in, "block align");
      bits = get<std::uint16_t>(in, "bits per sample");
      std::uint32_t consumed = 16;
      if (format == kFormatExtensible && size >= 40) {
        get<std::uint16_t>(in, "cb size");
        get<std::uint16_t>(in, "valid bits");
        get<std::uint32_t>(in, "channel mask");
        format = get<std::uint16_t>(in, "sub format");
        consumed += 10;
      }
      in.ignore(static_cast<std::streamsize>(size - consumed + (size & 1u)));
      have_fmt = true;
    } else if (tag_is(id, "data")) {
      if (!have_fmt) throw SonarError(ErrorKind::BadFile, "data chunk before fmt chunk");
      if (channels != 1) throw SonarError(ErrorKind::BadFile, "only mono WAV is supported");
      WavData wav;
      wav.sample_rate_hz = rate;
      if (format == kFormatPcm && bits == 16) {
        wav.samples.resize(size / 2);
        for (auto& s : wav.samples) s = static_cast<double>(get<std::int16_t>(in, "PCM sample")) / 32768.0;
      } else if (format == kFormatFloat && bits == 32) {
        wav.samples.resize(size / 4);
        for (auto& s : wav.samples) s = static_cast<double>(get<float>(in, "float sample"));
      } else {
        throw SonarError(ErrorKind::BadFile, "unsupported WAV encoding (need PCM16 or float32)");
      }
      return wav;
    } else {
      in.ignore(static_cast<std::streamsize>(size + (size & 1u)));
      if (!in) throw SonarError(ErrorKind::BadFile, "truncated chunk");
    }
  }
}

WavData read_wav(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_wav(in);
}

void write_wav(std::ostream& out, const WavData& wav, WavEncoding encoding) {
  const std::uint16_t bits = encoding == WavEncoding::pcm16 ? 16 : 32;
  const std::uint16_t format = encoding == WavEncoding::pcm16 ? kFormatPcm : kFormatFloat;
  const std::uint32_t block = bits / 8;
  const auto data_bytes = static_cast<std::uint32_t>(wav.samples.size() * block);
  const auto rate = static_cast<std::uint32_t>(std::llround(wav.sample_rate_hz));

  out.write("RIFF", 4);
  put<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put<std::uint32_t>(out, 16);
  put<std::uint16_t>(out, format);
  put<std::uint16_t>(out, 1);
  put<std::uint32_t>(out, rate);
  put<std::uint32_t>(out, rate * block);
  put<std::uint16_t>(out, static_cast<std::uint16_t>(block));
  put<std::uint16_t>(out, bits);
  out.write("data", 4);
  put<std::uint32_t>(out, data_bytes);
  for (double s : wav.samples) {
    if (encoding == WavEncoding::pcm16) {
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      put<std::int16_t>(out, static_cast<std::int16_t>(scaled));
    } else {
      put<float>(out, static_cast<float>(s));
    }
  }
}

void write_wav(const std::filesystem::path& path, const WavData& wav, WavEncoding encoding) {
  auto out = open_out(path);
  write_wav(out, wav, encoding);
}

std::vector<double> read_recording(const std::filesystem::path& path, double expected_sample_rate_hz) {
  WavData wav = read_wav(path);
  if (std::abs(wav.sample_rate_hz - expected_sample_rate_hz) > 0.5) {
    throw SonarError(ErrorKind::SampleRateMismatch, "'" + path.string() + "' is sampled at " +
                                                        std::to_string(wav.sample_rate_hz) + " Hz, config says " +
                                                        std::to_string(expected_sample_rate_hz) + " Hz");
  }
  return std::move(wav.samples);
}

void write_pdmx(std::ostream& out, const PulseMatrix& m) {
  out.write("PDMX", 4);
  put<std::uint16_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.gate_start_sample));
  put<double>(out, m.sample_rate_hz);
  put<double>(out, m.prf_hz);
  for (double v : m.data.values()) put<double>(out, v);
}

void write_pdmx(const std::filesystem::path& path, const PulseMatrix& m) {
  auto out = open_out(path);
  write_pdmx(out, m);
}

PulseMatrix read_pdmx(std::istream& in) {
  if (!tag_is(get_tag(in, "PDMX magic"), "PDMX")) throw SonarError(ErrorKind::BadFile, "bad PDMX magic");
  const auto version = get<std::uint16_t>(in, "version");
  if (version != 1) throw SonarError(ErrorKind::BadFile, "unsupported PDMX version " + std::to_string(version));
  const auto rows = get<std::uint32_t>(in, "rows");
  const auto cols = get<std::uint32_t>(in, "cols");
  PulseMatrix m;
  m.gate_start_sample = get<std::uint32_t>(in, "gate");
  m.sample_rate_hz = get<double>(in, "sample rate");
  m.prf_hz = get<double>(in, "prf");
  m.data = Matrix(rows, cols);
  for (double& v : m.data.values()) v = get<double>(in, "matrix body");
  return m;
}

PulseMatrix read_pdmx(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pdmx(in);
}

std::vector<std::uint8_t> log_scale_pixels(const Matrix& m) {
  double peak = 0.0;
  for (double v : m.values()) peak = std::max(peak, v);
  std::vector<std::uint8_t> px(m.values().size(), 0);
  if (peak <= 0.0) return px;
  const double denom = std::log10(1.0 + peak);
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double v = std::max(0.0, m.values()[i]);
    px[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::log10(1.0 + v) / denom));
  }
  return px;
}

void write_pgm(std::ostream& out, const Matrix& m) {
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  const auto px = log_scale_pixels(m);
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void write_pgm(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_pgm(out, m);
}

}  // namespace sonar::io
