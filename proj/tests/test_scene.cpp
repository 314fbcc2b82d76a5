#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "sonar/errors.hpp"
#include "sonar/scene.hpp"

using namespace sonar;
namespace {

constexpr double kPi = std::numbers::pi;

Scene open_scene(Vec2 fan, int blades, double length) {
  Scene s;
  s.fan_center = fan;
  s.blade_count = blades;
  s.blade_length = length;
  return s;
}

bool same_point(const Vec2& a, const Vec2& b, double tol = 1e-12) { return distance(a, b) < tol; }

// Unordered set equality of blade tips (all blades share the hub).
bool same_blade_set(const std::vector<Segment>& a, const std::vector<Segment>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& s : a) {
    const bool found = std::any_of(b.begin(), b.end(), [&](const Segment& t) { return same_point(s.b, t.b, tol); });
    if (!found) return false;
  }
  return true;
}

std::string default_text() {
  std::ostringstream out;
  write_config(out, default_config());
  return out.str();
}

std::string without_line(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("angle_at examples") {
  CHECK(angle_at({0.0, 1.0}, 100.0) == doctest::Approx(1.0));
  CHECK(angle_at({0.5, 0.0}, 1.0) == doctest::Approx(kPi));
  CHECK(angle_at({-0.5, 0.0}, 0.5) == doctest::Approx(1.5 * kPi));
  const double a = angle_at({3.7, 0.2}, 12.3456);
  CHECK(a >= 0.0);
  CHECK(a < 2.0 * kPi);
}

TEST_CASE("blade_segments: static four-blade cross") {
  const Scene s = open_scene({1.0, 2.0}, 4, 0.5);
  const auto blades = blade_segments(s, {0.0, 0.0}, 0.0);
  REQUIRE(blades.size() == 4);
  const Vec2 expected[] = {{1.5, 2.0}, {1.0, 2.5}, {0.5, 2.0}, {1.0, 1.5}};
  for (int k = 0; k < 4; ++k) {
    CHECK(same_point(blades[k].a, {1.0, 2.0}));
    CHECK(same_point(blades[k].b, expected[k]));
  }
}

TEST_CASE("blade_segments: 0.5 Hz turns a quarter in 0.5 s and a half in 1 s") {
  const Scene s = open_scene({0.0, 0.0}, 4, 0.58);
  const RotationModel rot{0.5, 0.3};
  const auto t0 = blade_segments(s, rot, 0.0);
  const auto quarter = blade_segments(s, rot, 0.5);
  const auto half = blade_segments(s, rot, 1.0);
  for (int k = 0; k < 4; ++k) {
    CHECK(same_point(quarter[k].b, rotate(t0[k].b, kPi / 2), 1e-12));
    CHECK(same_point(half[k].b, t0[k].b * -1.0, 1e-12));
  }
  // With four blades both are the same unordered set as at t = 0.
  CHECK(same_blade_set(t0, quarter, 1e-12));
  CHECK(same_blade_set(t0, half, 1e-12));
}

TEST_CASE("blade_segments: spacing and rotational period") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(-2.0, 2.0);
  std::uniform_real_distribution<double> time(0.0, 20.0);
  std::uniform_int_distribution<int> blades(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    double r = rate(rng);
    if (std::abs(r) < 0.05) r = 0.3;
    const int k = blades(rng);
    const Scene s = open_scene({0.4, -0.2}, k, 0.58);
    const RotationModel rot{r, 1.1};
    const double t = time(rng);
    const auto now = blade_segments(s, rot, t);
    REQUIRE(now.size() == static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      CHECK(distance(now[i].b, s.fan_center) <= s.blade_length + 1e-12);
      const int j = (i + 1) % k;
      const Vec2 di = now[i].b - s.fan_center;
      const Vec2 dj = now[j].b - s.fan_center;
      const double spacing = std::atan2(cross(di, dj), dot(di, dj));
      CHECK(std::abs(std::remainder(spacing - 2.0 * kPi / k, 2.0 * kPi)) < 1e-9);
    }
    const auto later = blade_segments(s, rot, t + 1.0 / (k * std::abs(r)));
    CHECK(same_blade_set(now, later, 1e-9));
  }
}

TEST_CASE("default scene geometry") {
  const SceneConfig cfg = default_config();
  CHECK(distance(cfg.scene.sensor_pos, cfg.scene.fan_center) == doctest::Approx(2.16));
  CHECK(cfg.scene.blade_count == 4);
  CHECK(cfg.scene.blade_length == 0.58);
  CHECK(cfg.scene.wall_reflectivity == 0.5);
  CHECK(cfg.waveform.prf_hz == 34.0);
  CHECK(cfg.waveform.sample_rate_hz == 44100.0);
  CHECK(cfg.waveform.pulse_count == 175);
  CHECK(strictly_inside(cfg.scene.walls, cfg.scene.sensor_pos));
  CHECK(strictly_inside(cfg.scene.walls, cfg.scene.fan_center));
  CHECK_NOTHROW(cfg.scene.validate());
}

TEST_CASE("strictly_inside") {
  const std::vector<Wall> square = {
      {{0.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {1.0, 1.0}}, {{1.0, 1.0}, {0.0, 1.0}}, {{0.0, 1.0}, {0.0, 0.0}}};
  CHECK(strictly_inside(square, {0.5, 0.5}));
  CHECK_FALSE(strictly_inside(square, {1.5, 0.5}));
  CHECK_FALSE(strictly_inside(square, {1.0, 0.5}));  // on the boundary
}

TEST_CASE("config file round trip and shipped file") {
  const std::string text = default_text();
  std::istringstream in(text);
  const SceneConfig parsed = parse_config(in);
  std::ostringstream again;
  write_config(again, parsed);
  CHECK(again.str() == text);

  const SceneConfig shipped = load_config(std::string(SONAR_SOURCE_DIR) + "/config/default_scene.cfg");
  std::ostringstream shipped_text;
  write_config(shipped_text, shipped);
  CHECK(shipped_text.str() == text);
}

TEST_CASE("config errors name the problem") {
  const std::string text = default_text();
  for (const std::string key : {"rate_hz", "fs", "wall.3.by", "blade_len"}) {
    std::istringstream in(without_line(text, key));
    try {
      parse_config(in);
      FAIL("missing key accepted: " << key);
    } catch (const SonarError& e) {
      CHECK(e.kind() == ErrorKind::Config);
      CHECK(std::string(e.what()).find("'" + key + "'") != std::string::npos);
    }
  }
  {
    std::istringstream in(text + "colour=blue\n");
    CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("unknown key 'colour'"), SonarError);
  }
  {
    std::istringstream in(text + "fs=48000\n");
    CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("duplicate key 'fs'"), SonarError);
  }
  {
    std::istringstream in(without_line(text, "sensor.x") + "sensor.x=50\n");
    CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("sensor"), SonarError);
  }
  {
    std::istringstream in(without_line(text, "blades") + "blades=0\n");
    CHECK_THROWS_AS(parse_config(in), SonarError);
  }
  {
    std::istringstream in(without_line(text, "prf") + "prf=4000\n");  // PRI shorter than two impulses
    CHECK_THROWS_AS(parse_config(in), SonarError);
  }
  {
    std::istringstream in("# comment only\n\n" + text);
    CHECK_NOTHROW(parse_config(in));
  }
  CHECK_THROWS_AS(load_config("/nonexistent/scene.cfg"), SonarError);
}

TEST_CASE("waveform impulse") {
  WaveformConfig wf;
  const auto shape = wf.impulse_shape();
  REQUIRE(shape.size() == wf.impulse_len_samples);
  CHECK(shape.front() == 1.0);
  for (std::size_t i = 1; i < shape.size(); ++i) CHECK(shape[i] < shape[i - 1]);
  CHECK(wf.pri_samples() == doctest::Approx(1297.0588235294));
}
