// sonarkit: simulate collections and run the range-doppler, ISAR and
// fingerprint processing chains from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "sonar/errors.hpp"
#include "sonar/fingerprint.hpp"
#include "sonar/io.hpp"
#include "sonar/isar.hpp"
#include "sonar/pulsegrid.hpp"
#include "sonar/raysim.hpp"
#include "sonar/rdmap.hpp"
#include "sonar/scene.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct GlobalFlags {
  std::string config_path;
  std::string out_prefix = "sonarkit";
  std::uint64_t seed = 0;
};

sonar::SceneConfig resolve_config(const GlobalFlags& g) {
  return g.config_path.empty() ? sonar::default_config() : sonar::load_config(g.config_path);
}

std::filesystem::path output_path(const GlobalFlags& g, const std::string& suffix) {
  std::filesystem::path p(g.out_prefix + suffix);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

std::ofstream open_text(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw sonar::SonarError(sonar::ErrorKind::BadFile, "cannot write '" + p.string() + "'");
  return out;
}

sonar::PulseMatrix load_matrix(const std::string& wav, const sonar::WaveformConfig& wf) {
  const auto samples = sonar::io::read_recording(wav, wf.sample_rate_hz);
  const std::size_t start = sonar::detect_leading_edge(samples);
  return sonar::form_matrix(samples, start, wf);
}

int exit_code_for(sonar::ErrorKind kind) {
  switch (kind) {
    case sonar::ErrorKind::NoDopplerPeak:
    case sonar::ErrorKind::InsufficientSamples:
    case sonar::ErrorKind::AllZeroSignal:
      return kExitData;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed-doppler sonar toolkit for rotating-blade targets"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config_path, "Scene/waveform config (key=value); built-in default room if omitted")
      ->check(CLI::ExistingFile);
  app.add_option("--out", g.out_prefix, "Output path prefix")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for optional additive noise (the pipeline itself is deterministic)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Ray-trace a collection; writes <out>.wav and <out>_events.csv");
  std::optional<double> rate_override;
  std::optional<double> angle_override;
  std::optional<std::size_t> pulses_override;
  double noise_std = 0.0;
  bool pcm16 = false;
  sim->add_option("--rate-hz", rate_override, "Rotation rate, positive counterclockwise");
  sim->add_option("--angle0-rad", angle_override, "Rotor angle at the first pulse");
  sim->add_option("--pulses", pulses_override, "Number of pulses")->check(CLI::PositiveNumber);
  sim->add_option("--noise-std", noise_std, "Gaussian noise standard deviation (uses --seed)")
      ->check(CLI::NonNegativeNumber);
  sim->add_flag("--pcm16", pcm16, "Write 16-bit PCM instead of float32");

  // rd
  auto* rd = app.add_subcommand("rd", "Range-doppler map; writes <out>_rd.pdmx and <out>_rd.pgm");
  std::string rd_input;
  std::optional<std::size_t> rd_gate;
  bool hann = false;
  rd->add_option("input", rd_input, "Recording (mono WAV)")->required()->check(CLI::ExistingFile);
  rd->add_option("--gate", rd_gate, "First fast-time sample kept (default: none)");
  rd->add_flag("--hann", hann, "Hann window along slow time");

  // isar
  auto* isar = app.add_subcommand("isar", "Backprojection image; writes <out>_isar.pgm and <out>_isar.pdmx");
  std::string isar_input;
  std::optional<double> isar_rate;
  double extent = 0.4;
  std::size_t pixels = 201;
  std::optional<std::size_t> far_gate;
  bool direct_only = false;
  bool ambiguity = false;
  isar->add_option("input", isar_input, "Recording (mono WAV)")->required()->check(CLI::ExistingFile);
  isar->add_option("--rate,--rate-hz", isar_rate, "Assumed rotation rate (default: config rate)");
  isar->add_option("--extent", extent, "Image half-width in meters")->capture_default_str()->check(CLI::PositiveNumber);
  isar->add_option("--pixels", pixels, "Pixels per side (odd)")->capture_default_str();
  isar->add_option("--far-gate", far_gate, "Drop fast-time samples at and beyond this index");
  isar->add_flag("--direct-only", direct_only, "Far gate at hub range plus half a blade");
  isar->add_flag("--ambiguity", ambiguity, "Also report the +rate/-rate rotation-search correlation");

  // fingerprint
  auto* fpcmd = app.add_subcommand("fingerprint", "Match a second collection against a reference");
  std::string fp_ref;
  std::string fp_second;
  std::optional<std::size_t> fp_gate;
  std::optional<std::size_t> fp_target;
  sonar::SmoothOptions smooth_opts;
  fpcmd->add_option("reference", fp_ref, "Reference recording")->required()->check(CLI::ExistingFile);
  fpcmd->add_option("second", fp_second, "Second recording")->required()->check(CLI::ExistingFile);
  fpcmd->add_option("--gate", fp_gate, "First fast-time sample kept (default: hub bin - 5)");
  fpcmd->add_option("--target-bin", fp_target, "Fast-time bin for period estimation (default: hub bin)");
  fpcmd->add_option("--slew", smooth_opts.slew_limit, "Slew limit, pulses per pulse")->capture_default_str();
  fpcmd->add_option("--epsilon", smooth_opts.epsilon, "Verdict dead zone")->capture_default_str();
  fpcmd->add_option("--q", smooth_opts.process_noise, "Kalman process noise")->capture_default_str();
  fpcmd->add_option("--r", smooth_opts.measurement_noise, "Kalman measurement noise")->capture_default_str();

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Repeatability and injectivity of a collection's signal profile");
  std::string diag_input;
  std::optional<std::size_t> diag_gate;
  std::optional<std::size_t> diag_target;
  std::size_t separation = 2;
  diag->add_option("input", diag_input, "Recording (mono WAV)")->required()->check(CLI::ExistingFile);
  diag->add_option("--gate", diag_gate, "First fast-time sample kept (default: hub bin - 5)");
  diag->add_option("--target-bin", diag_target, "Fast-time bin for period estimation (default: hub bin)");
  diag->add_option("--separation", separation, "Minimum circular separation for distinct angles")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    sonar::SceneConfig cfg = resolve_config(g);
    const sonar::WaveformConfig& wf = cfg.waveform;

    if (*sim) {
      if (rate_override) cfg.rotation.rate_hz = *rate_override;
      if (angle_override) cfg.rotation.initial_angle_rad = sonar::wrap_angle(*angle_override);
      if (pulses_override) cfg.waveform.pulse_count = *pulses_override;
      auto collection = sonar::simulate_collection(cfg.scene, cfg.rotation, cfg.waveform);
      if (noise_std > 0.0) {
        std::mt19937_64 rng(g.seed);
        std::normal_distribution<double> noise(0.0, noise_std);
        for (double& s : collection.samples) s += noise(rng);
      }
      sonar::io::WavData wav{collection.samples, cfg.waveform.sample_rate_hz};
      const auto wav_path = output_path(g, ".wav");
      sonar::io::write_wav(wav_path, wav, pcm16 ? sonar::io::WavEncoding::pcm16 : sonar::io::WavEncoding::float32);
      const auto csv_path = output_path(g, "_events.csv");
      auto csv = open_text(csv_path);
      sonar::write_events_csv(csv, collection);
      std::cout << "wrote " << wav_path.string() << " (" << cfg.waveform.pulse_count << " pulses, "
                << collection.samples.size() << " samples) and " << csv_path.string() << '\n';
    } else if (*rd) {
      sonar::PulseMatrix m = load_matrix(rd_input, wf);
      if (rd_gate) m = sonar::apply_gate(m, *rd_gate);
      const auto map = sonar::range_doppler(m, {hann});
      sonar::io::write_pdmx(output_path(g, "_rd.pdmx"), sonar::magnitude_matrix(map));
      sonar::io::write_pgm(output_path(g, "_rd.pgm"), map.magnitude);
      nlohmann::json report{{"rows", map.rows()}, {"cols", map.cols()}, {"doppler_bin_hz", map.doppler_bin_hz}};
      const std::size_t target = sonar::target_range_bin(cfg.scene, wf);
      if (target >= m.gate_start_sample && target < m.gate_start_sample + m.rows()) {
        try {
          report["target_bin"] = target;
          report["doppler_peak_hz"] = sonar::doppler_peak_at_range(map, target - m.gate_start_sample);
        } catch (const sonar::SonarError& e) {
          if (e.kind() != sonar::ErrorKind::NoDopplerPeak) throw;
          report["doppler_peak_hz"] = nullptr;
        }
      }
      std::cout << report.dump() << '\n';
    } else if (*isar) {
      sonar::PulseMatrix m = load_matrix(isar_input, wf);
      if (direct_only) m = sonar::truncate_range(m, sonar::direct_only_far_gate(cfg.scene, wf));
      if (far_gate) m = sonar::truncate_range(m, *far_gate);
      const double rate = isar_rate.value_or(cfg.rotation.rate_hz);
      const auto img = sonar::backproject(m, cfg.scene, rate, extent, pixels);
      const auto pgm_path = output_path(g, "_isar.pgm");
      sonar::io::write_pgm(pgm_path, img.pixels);
      sonar::io::write_pdmx(output_path(g, "_isar.pdmx"), sonar::PulseMatrix{img.pixels, wf.sample_rate_hz, wf.prf_hz, 0});
      nlohmann::json report{{"image", pgm_path.string()}, {"rate_hz", rate}, {"pixel_pitch_m", img.pixel_pitch_m}};
      if (ambiguity) {
        const auto reverse = sonar::backproject(m, cfg.scene, -rate, extent, pixels);
        report["ambiguity_correlation"] = sonar::rotation_search_correlation(img.pixels, reverse.pixels);
      }
      std::cout << report.dump() << '\n';
    } else if (*fpcmd) {
      const std::size_t gate = fp_gate.value_or(sonar::default_simulation_gate(cfg.scene, wf));
      const std::size_t target = fp_target.value_or(sonar::target_range_bin(cfg.scene, wf));
      const auto ref = sonar::build_reference(load_matrix(fp_ref, wf), target, gate);
      const auto second = sonar::apply_gate(load_matrix(fp_second, wf), gate);
      const auto trace = sonar::match(ref, second);
      const auto fp = sonar::smooth(trace, ref.period_pulses, smooth_opts);
      auto csv = open_text(output_path(g, "_fingerprint.csv"));
      sonar::write_fingerprint_csv(csv, trace, fp);
      sonar::PulseMatrix dist{trace.distance_matrix, wf.sample_rate_hz, wf.prf_hz, 0};
      sonar::io::write_pdmx(output_path(g, "_distance.pdmx"), dist);
      sonar::io::write_pgm(output_path(g, "_distance.pgm"), trace.distance_matrix);
      sonar::write_verdict_line(std::cout, fp);
      std::cout << '\n';
    } else if (*diag) {
      const std::size_t gate = diag_gate.value_or(sonar::default_simulation_gate(cfg.scene, wf));
      const std::size_t target = diag_target.value_or(sonar::target_range_bin(cfg.scene, wf));
      const auto full = load_matrix(diag_input, wf);
      const auto ref = sonar::build_reference(full, target, gate);
      const auto d = sonar::profile_diagnostics(ref, sonar::apply_gate(full, gate), separation);
      nlohmann::json report{{"period_pulses", ref.period_pulses},
                            {"repeatability", d.repeatability},
                            {"injectivity_margin", d.injectivity_margin}};
      std::cout << report.dump() << '\n';
    }
  } catch (const sonar::SonarError& e) {
    std::cerr << "sonarkit: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "sonarkit: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
