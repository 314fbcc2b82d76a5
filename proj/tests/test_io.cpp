#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sonar/errors.hpp"
#include "sonar/io.hpp"

using namespace sonar;
namespace {

template <typename T>
void put(std::string& s, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  s.append(buf, sizeof(T));
}

// Hand-built PCM16 file with an extra LIST chunk before the data.
std::string pcm16_file(const std::vector<std::int16_t>& samples, std::uint32_t rate, std::uint16_t channels = 1) {
  std::string body;
  body += "WAVE";
  body += "fmt ";
  put<std::uint32_t>(body, 16);
  put<std::uint16_t>(body, 1);
  put<std::uint16_t>(body, channels);
  put<std::uint32_t>(body, rate);
  put<std::uint32_t>(body, rate * 2 * channels);
  put<std::uint16_t>(body, static_cast<std::uint16_t>(2 * channels));
  put<std::uint16_t>(body, 16);
  body += "LIST";
  put<std::uint32_t>(body, 3);
  body += "abc";
  body += '\0';  // pad byte
  body += "data";
  put<std::uint32_t>(body, static_cast<std::uint32_t>(samples.size() * 2));
  for (auto v : samples) put<std::int16_t>(body, v);
  std::string file = "RIFF";
  put<std::uint32_t>(file, static_cast<std::uint32_t>(body.size()));
  return file + body;
}

}  // namespace

TEST_CASE("PCM16 WAV with an unknown chunk") {
  std::istringstream in(pcm16_file({0, 16384, -32768, 32767}, 44100));
  const auto wav = io::read_wav(in);
  CHECK(wav.sample_rate_hz == 44100.0);
  REQUIRE(wav.samples.size() == 4);
  CHECK(wav.samples[1] == 0.5);
  CHECK(wav.samples[2] == -1.0);
  CHECK(wav.samples[3] == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("WAV round trips") {
  io::WavData wav{{0.0, 0.25, -0.5, 0.125, 1.0}, 44100.0};
  {
    std::stringstream buf;
    io::write_wav(buf, wav, io::WavEncoding::float32);
    const auto back = io::read_wav(buf);
    CHECK(back.samples == wav.samples);
    CHECK(back.sample_rate_hz == 44100.0);
  }
  {
    std::stringstream buf;
    io::write_wav(buf, wav, io::WavEncoding::pcm16);
    const auto back = io::read_wav(buf);
    REQUIRE(back.samples.size() == wav.samples.size());
    for (std::size_t i = 0; i < 4; ++i) CHECK(back.samples[i] == wav.samples[i]);
    CHECK(back.samples[4] == doctest::Approx(1.0).epsilon(1e-4));  // clipped to full scale
  }
}

TEST_CASE("bad WAV inputs") {
  {
    std::istringstream in(std::string("RIFX\0\0\0\0WAVE", 12));
    CHECK_THROWS_WITH_AS(io::read_wav(in), doctest::Contains("BadFile"), SonarError);
  }
  {
    std::istringstream in(pcm16_file({1, 2}, 44100, 2));
    CHECK_THROWS_WITH_AS(io::read_wav(in), doctest::Contains("mono"), SonarError);
  }
  {
    std::string truncated = pcm16_file({1, 2, 3, 4}, 44100);
    truncated.resize(truncated.size() - 3);
    std::istringstream in(truncated);
    CHECK_THROWS_AS(io::read_wav(in), SonarError);
  }
  CHECK_THROWS_AS(io::read_wav(std::filesystem::path("/nonexistent.wav")), SonarError);
}

TEST_CASE("sample rate must match the configuration") {
  const auto path = std::filesystem::temp_directory_path() / "sonar_rate_test.wav";
  io::write_wav(path, {{0.1, 0.2}, 48000.0});
  CHECK_THROWS_WITH_AS(io::read_recording(path, 44100.0), doctest::Contains("SampleRateMismatch"), SonarError);
  CHECK(io::read_recording(path, 48000.0).size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("PDMX layout and round trip") {
  PulseMatrix m;
  m.data = Matrix(2, 3);
  for (std::size_t i = 0; i < 6; ++i) m.data.values()[i] = 0.5 * static_cast<double>(i) - 1.0;
  m.gate_start_sample = 250;
  m.sample_rate_hz = 44100.0;
  m.prf_hz = 34.0;
  std::stringstream buf;
  io::write_pdmx(buf, m);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() == 4 + 2 + 4 * 3 + 8 * 2 + 6 * 8);
  CHECK(bytes.substr(0, 4) == "PDMX");
  std::uint16_t version = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint32_t gate = 0;
  double first = 0.0;
  std::memcpy(&version, bytes.data() + 4, 2);
  std::memcpy(&rows, bytes.data() + 6, 4);
  std::memcpy(&cols, bytes.data() + 10, 4);
  std::memcpy(&gate, bytes.data() + 14, 4);
  std::memcpy(&first, bytes.data() + 34, 8);
  CHECK(version == 1);
  CHECK(rows == 2);
  CHECK(cols == 3);
  CHECK(gate == 250);
  CHECK(first == -1.0);

  const auto back = io::read_pdmx(buf);
  CHECK(back.data == m.data);
  CHECK(back.gate_start_sample == 250);
  CHECK(back.prf_hz == 34.0);
  CHECK(back.sample_rate_hz == 44100.0);

  std::istringstream bad("PDMY");
  CHECK_THROWS_AS(io::read_pdmx(bad), SonarError);
}

TEST_CASE("PGM log scaling") {
  Matrix m(2, 2);
  m(0, 0) = 0.0;
  m(0, 1) = 9.0;
  m(1, 0) = 99.0;
  m(1, 1) = 999.0;
  const auto px = io::log_scale_pixels(m);
  CHECK(px[0] == 0);
  CHECK(px[1] == 85);
  CHECK(px[2] == 170);
  CHECK(px[3] == 255);

  std::ostringstream out;
  io::write_pgm(out, m);
  const std::string s = out.str();
  CHECK(s.rfind("P5\n2 2\n255\n", 0) == 0);
  CHECK(s.size() == std::string("P5\n2 2\n255\n").size() + 4);

  CHECK(io::log_scale_pixels(Matrix(1, 3)) == std::vector<std::uint8_t>{0, 0, 0});
}
