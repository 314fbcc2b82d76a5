#include "sonar/scene.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sonar/errors.hpp"

namespace sonar {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw SonarError(ErrorKind::Config, "key '" + key + "' has non-numeric value '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (std::floor(v) != v) {
    throw SonarError(ErrorKind::Config, "key '" + key + "' must be an integer, got '" + text + "'");
  }
  return static_cast<long long>(v);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Keys other than the indexed wall.N.* family.
const std::set<std::string>& scalar_keys() {
  static const std::set<std::string> keys = {
      "sensor.x", "sensor.y", "fan.x", "fan.y",  "blades",  "blade_len",   "blade_pitch_deg",
      "wall_refl", "blade_refl", "c",   "prf",   "fs",      "pulses",      "impulse_len",
      "rate_hz",  "angle0"};
  return keys;
}

}  // namespace

double wrap_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;  // fmod of a tiny negative can round up to 2*pi
  return r;
}

double RotationModel::angle_at(double t) const { return wrap_angle(initial_angle_rad + kTwoPi * rate_hz * t); }

double angle_at(const RotationModel& rot, double t) { return rot.angle_at(t); }

std::vector<Segment> blade_segments(const Scene& scene, const RotationModel& rot, double t) {
  // Unreduced phase keeps segment k and k' = k + K exactly consistent.
  const double base = rot.initial_angle_rad + kTwoPi * rot.rate_hz * t;
  std::vector<Segment> blades;
  blades.reserve(static_cast<std::size_t>(scene.blade_count));
  for (int k = 0; k < scene.blade_count; ++k) {
    const double phi = wrap_angle(base + kTwoPi * k / scene.blade_count);
    blades.push_back({scene.fan_center, scene.fan_center + unit_from_angle(phi) * scene.blade_length});
  }
  return blades;
}

bool strictly_inside(const std::vector<Wall>& walls, const Vec2& p) {
  if (walls.size() < 3) return false;
  bool inside = false;
  for (const Wall& w : walls) {
    // On-boundary points are not strictly inside.
    const double u = projection_parameter(p, w);
    if (u >= 0.0 && u <= 1.0 && distance(w.at(u), p) < 1e-9) return false;
    const Vec2& a = w.a;
    const Vec2& b = w.b;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

void Scene::validate() const {
  if (blade_count < 1) throw SonarError(ErrorKind::Config, "blade_count must be >= 1");
  if (!(blade_length > 0.0)) throw SonarError(ErrorKind::Config, "blade_length must be > 0");
  if (!(sound_speed > 0.0)) throw SonarError(ErrorKind::Config, "sound_speed must be > 0");
  if (!(wall_reflectivity > 0.0 && wall_reflectivity <= 1.0)) {
    throw SonarError(ErrorKind::Config, "wall_reflectivity must lie in (0,1]");
  }
  if (!(blade_reflectivity > 0.0 && blade_reflectivity <= 1.0)) {
    throw SonarError(ErrorKind::Config, "blade_reflectivity must lie in (0,1]");
  }
  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (walls[i].a == walls[i].b) {
      throw SonarError(ErrorKind::Config, "wall " + std::to_string(i) + " has coincident endpoints");
    }
  }
  if (!strictly_inside(walls, sensor_pos)) {
    throw SonarError(ErrorKind::Config, "sensor is not strictly inside the wall polygon");
  }
  if (!strictly_inside(walls, fan_center)) {
    throw SonarError(ErrorKind::Config, "fan center is not strictly inside the wall polygon");
  }
}

std::vector<double> WaveformConfig::impulse_shape() const {
  std::vector<double> shape(impulse_len_samples);
  const double n_total = static_cast<double>(impulse_len_samples);
  for (std::size_t n = 0; n < impulse_len_samples; ++n) {
    shape[n] = 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(n) / n_total));
  }
  return shape;
}

void WaveformConfig::validate() const {
  if (!(prf_hz > 0.0)) throw SonarError(ErrorKind::Config, "prf must be > 0");
  if (!(sample_rate_hz > 0.0)) throw SonarError(ErrorKind::Config, "fs must be > 0");
  if (pulse_count < 2) throw SonarError(ErrorKind::Config, "pulses must be >= 2");
  if (impulse_len_samples < 1) throw SonarError(ErrorKind::Config, "impulse_len must be >= 1");
  if (sample_rate_hz / prf_hz < 2.0 * static_cast<double>(impulse_len_samples)) {
    throw SonarError(ErrorKind::Config, "fs/prf must be at least twice impulse_len");
  }
}

SceneConfig default_config() {
  SceneConfig cfg;
  Scene& s = cfg.scene;
  // Hexagonal room; coordinates in meters with the sensor at the origin.
  const std::vector<Vec2> corners = {
      {1.334, 1.61}, {-0.174, 1.523}, {-1.602, 0.03}, {-0.012, -1.213}, {1.707, -1.031}, {4.173, 0.412}};
  for (std::size_t i = 0; i < corners.size(); ++i) {
    s.walls.push_back({corners[i], corners[(i + 1) % corners.size()]});
  }
  s.sensor_pos = {0.0, 0.0};
  s.fan_center = {2.16, 0.0};
  // Half a pulse step of blade-pass phase: 17 pulses per quarter turn sample
  // the rotor symmetrically about the sensor axis.
  cfg.rotation = {0.5, std::numbers::pi / 68.0};
  return cfg;
}

SceneConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw SonarError(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw SonarError(ErrorKind::Config, "line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!values.emplace(key, value).second) {
      throw SonarError(ErrorKind::Config, "duplicate key '" + key + "'");
    }
  }

  // Validate the key set before reading any values.
  std::map<long long, std::set<std::string>> wall_fields;
  for (const auto& [key, value] : values) {
    if (scalar_keys().count(key) || key == "spreading_loss") continue;
    if (key.rfind("wall.", 0) == 0) {
      const auto dot = key.find('.', 5);
      if (dot != std::string::npos) {
        const std::string index_text = key.substr(5, dot - 5);
        const std::string field = key.substr(dot + 1);
        const bool digits = !index_text.empty() && index_text.find_first_not_of("0123456789") == std::string::npos;
        if (digits && (field == "ax" || field == "ay" || field == "bx" || field == "by")) {
          wall_fields[std::stoll(index_text)].insert(field);
          continue;
        }
      }
    }
    throw SonarError(ErrorKind::Config, "unknown key '" + key + "'");
  }
  for (const auto& key : scalar_keys()) {
    if (!values.count(key)) throw SonarError(ErrorKind::Config, "missing key '" + key + "'");
  }
  if (wall_fields.empty()) throw SonarError(ErrorKind::Config, "missing key 'wall.0.ax'");
  const long long wall_count = static_cast<long long>(wall_fields.size());
  for (long long i = 0; i < wall_count; ++i) {
    for (const char* field : {"ax", "ay", "bx", "by"}) {
      const auto it = wall_fields.find(i);
      if (it == wall_fields.end() || !it->second.count(field)) {
        throw SonarError(ErrorKind::Config, "missing key 'wall." + std::to_string(i) + "." + field + "'");
      }
    }
  }

  auto num = [&](const std::string& key) { return parse_double(key, values.at(key)); };
  auto integer = [&](const std::string& key) { return parse_integer(key, values.at(key)); };

  SceneConfig cfg;
  Scene& s = cfg.scene;
  for (long long i = 0; i < wall_count; ++i) {
    const std::string p = "wall." + std::to_string(i) + ".";
    s.walls.push_back({{num(p + "ax"), num(p + "ay")}, {num(p + "bx"), num(p + "by")}});
  }
  s.sensor_pos = {num("sensor.x"), num("sensor.y")};
  s.fan_center = {num("fan.x"), num("fan.y")};
  s.blade_count = static_cast<int>(integer("blades"));
  s.blade_length = num("blade_len");
  s.blade_pitch_deg = num("blade_pitch_deg");
  s.wall_reflectivity = num("wall_refl");
  s.blade_reflectivity = num("blade_refl");
  s.sound_speed = num("c");
  if (values.count("spreading_loss")) s.spreading_loss = integer("spreading_loss") != 0;

  WaveformConfig& w = cfg.waveform;
  w.prf_hz = num("prf");
  w.sample_rate_hz = num("fs");
  const long long pulses = integer("pulses");
  const long long impulse_len = integer("impulse_len");
  if (pulses < 0 || impulse_len < 0) throw SonarError(ErrorKind::Config, "pulses and impulse_len must be >= 0");
  w.pulse_count = static_cast<std::size_t>(pulses);
  w.impulse_len_samples = static_cast<std::size_t>(impulse_len);

  cfg.rotation.rate_hz = num("rate_hz");
  cfg.rotation.initial_angle_rad = wrap_angle(num("angle0"));

  s.validate();
  w.validate();
  return cfg;
}

SceneConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SonarError(ErrorKind::Config, "cannot open config '" + path.string() + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const SceneConfig& cfg) {
  const Scene& s = cfg.scene;
  for (std::size_t i = 0; i < s.walls.size(); ++i) {
    const std::string p = "wall." + std::to_string(i) + ".";
    out << p << "ax=" << format_double(s.walls[i].a.x) << '\n'
        << p << "ay=" << format_double(s.walls[i].a.y) << '\n'
        << p << "bx=" << format_double(s.walls[i].b.x) << '\n'
        << p << "by=" << format_double(s.walls[i].b.y) << '\n';
  }
  out << "sensor.x=" << format_double(s.sensor_pos.x) << '\n'
      << "sensor.y=" << format_double(s.sensor_pos.y) << '\n'
      << "fan.x=" << format_double(s.fan_center.x) << '\n'
      << "fan.y=" << format_double(s.fan_center.y) << '\n'
      << "blades=" << s.blade_count << '\n'
      << "blade_len=" << format_double(s.blade_length) << '\n'
      << "blade_pitch_deg=" << format_double(s.blade_pitch_deg) << '\n'
      << "wall_refl=" << format_double(s.wall_reflectivity) << '\n'
      << "blade_refl=" << format_double(s.blade_reflectivity) << '\n'
      << "c=" << format_double(s.sound_speed) << '\n'
      << "spreading_loss=" << (s.spreading_loss ? 1 : 0) << '\n'
      << "prf=" << format_double(cfg.waveform.prf_hz) << '\n'
      << "fs=" << format_double(cfg.waveform.sample_rate_hz) << '\n'
      << "pulses=" << cfg.waveform.pulse_count << '\n'
      << "impulse_len=" << cfg.waveform.impulse_len_samples << '\n'
      << "rate_hz=" << format_double(cfg.rotation.rate_hz) << '\n'
      << "angle0=" << format_double(cfg.rotation.initial_angle_rad) << '\n';
}

}  // namespace sonar
