#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "sonar/errors.hpp"
#include "sonar/fingerprint.hpp"
#include "sonar/raysim.hpp"

using namespace sonar;
namespace {

PulseMatrix simulate_matrix(double rate) {
  SceneConfig cfg = default_config();
  cfg.rotation.rate_hz = rate;
  const auto sim = simulate_collection(cfg.scene, cfg.rotation, cfg.waveform);
  return form_matrix(sim.samples, 0, cfg.waveform);
}

ReferenceBlock random_reference(std::mt19937_64& rng, std::size_t rows, std::size_t n) {
  ReferenceBlock ref;
  ref.pulses = oracle::random_matrix(rng, rows, n);
  ref.period_pulses = static_cast<double>(n);
  return ref;
}

PulseMatrix columns_of(const PulseMatrix& src, const std::vector<std::size_t>& cols) {
  PulseMatrix out = src;
  out.data = Matrix(src.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t r = 0; r < src.rows(); ++r) out.data(r, j) = src.data(r, cols[j]);
  }
  return out;
}

MatchTrace trace_of(const std::vector<std::size_t>& raw) {
  MatchTrace t;
  t.raw_match = raw;
  return t;
}

void check_slew(const AngularFingerprint& fp, double slew) {
  for (std::size_t j = 1; j < fp.filtered.size(); ++j) {
    REQUIRE(std::abs(fp.filtered[j] - fp.filtered[j - 1]) <= slew + 1e-12);
  }
}

struct Sims {
  PulseMatrix third = simulate_matrix(1.0 / 3.0);
  PulseMatrix half = simulate_matrix(0.5);
  PulseMatrix half_cw = simulate_matrix(-0.5);
};

const Sims& sims() {
  static const Sims s;
  return s;
}

constexpr std::size_t kTarget = 555;
constexpr std::size_t kGate = 550;

}  // namespace

TEST_CASE("simulation defaults for target bin and gate") {
  const SceneConfig cfg = default_config();
  CHECK(target_range_bin(cfg.scene, cfg.waveform) == kTarget);
  CHECK(default_simulation_gate(cfg.scene, cfg.waveform) == kGate);
}

TEST_CASE("build_reference period and block size") {
  const auto half = build_reference(sims().half, kTarget, kGate);
  CHECK(half.period_pulses == doctest::Approx(17.0).epsilon(0.5 / 17.0));
  CHECK(half.pulses.cols() == 17);
  CHECK(half.pulses.gate_start_sample == kGate);
  CHECK(half.pulses.rows() == sims().half.rows() - kGate);
  CHECK(half.pulses.data(0, 3) == sims().half.data(kGate, 3));

  const auto third = build_reference(sims().third, kTarget, kGate);
  CHECK(third.period_pulses == doctest::Approx(25.5).epsilon(0.5 / 25.5));
  // 25.5 is a rounding knife edge: the stored block follows the estimate.
  CHECK(std::abs(third.period_pulses - 25.5) < 0.05);
  CHECK(third.pulses.cols() == static_cast<std::size_t>(std::llround(third.period_pulses)));

  const auto shifted = build_reference(sims().half, kTarget, kGate, 9);
  CHECK(shifted.start_pulse == 9);
  CHECK(shifted.pulses.data(0, 0) == sims().half.data(kGate, 9));
}

TEST_CASE("build_reference errors") {
  const auto still = simulate_matrix(0.0);
  CHECK_THROWS_WITH_AS(build_reference(still, kTarget, kGate), doctest::Contains("NoDopplerPeak"), SonarError);
  CHECK_THROWS_AS(build_reference(sims().half, kTarget, kGate, 160), InsufficientSamplesError);
  CHECK_THROWS_AS(build_reference(sims().half, 5000, kGate), SonarError);
}

TEST_CASE("self match is the identity with zero diagonal") {
  const auto ref = build_reference(sims().third, kTarget, kGate);
  const auto trace = match(ref, ref.pulses);
  for (std::size_t j = 0; j < trace.raw_match.size(); ++j) {
    CHECK(trace.raw_match[j] == j);
    CHECK(trace.distance_matrix(j, j) == 0.0);
  }
}

TEST_CASE("match rejects a different gate") {
  const auto ref = build_reference(sims().half, kTarget, kGate);
  CHECK_THROWS_WITH_AS(match(ref, apply_gate(sims().half, 250)), doctest::Contains("GateMismatch"), SonarError);
  CHECK_THROWS_AS(match(ref, sims().half), SonarError);
  CHECK_THROWS_AS(apply_gate(ref.pulses, 10), SonarError);
}

TEST_CASE("distance matrix is the energy norm and ties go to the lowest index") {
  ReferenceBlock ref;
  ref.pulses.data = Matrix(2, 3);
  ref.pulses.data(0, 0) = 1.0;  // columns (1,0), (0,1), (1,0)
  ref.pulses.data(1, 1) = 1.0;
  ref.pulses.data(0, 2) = 1.0;
  ref.period_pulses = 3.0;
  PulseMatrix second = ref.pulses;
  second.data = Matrix(2, 2);
  second.data(0, 0) = 1.0;
  second.data(0, 1) = 3.0;
  second.data(1, 1) = 4.0;
  const auto t = match(ref, second);
  CHECK(t.raw_match[0] == 0);
  CHECK(t.distance_matrix(0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(t.distance_matrix(1, 0) == doctest::Approx(std::sqrt(4.0 + 16.0)));
  CHECK(t.distance_matrix(1, 1) == doctest::Approx(std::sqrt(9.0 + 9.0)));
  CHECK(t.raw_match[1] == 1);
}

TEST_CASE("argmin scale invariance and shift equivariance on random fixtures") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 10 + seed % 20;
    const auto ref = random_reference(rng, 64, n);
    const auto second = oracle::random_matrix(rng, 64, 40);
    const auto base = match(ref, second);

    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    const double a = scale(rng);
    ReferenceBlock ref_scaled = ref;
    PulseMatrix second_scaled = second;
    for (double& v : ref_scaled.pulses.data.values()) v *= a;
    for (double& v : second_scaled.data.values()) v *= a;
    CHECK(match(ref_scaled, second_scaled).raw_match == base.raw_match);

    const std::size_t s = 1 + seed % (n - 1);
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = (j + s) % n;
    const auto shifted = match(ref, columns_of(ref.pulses, cols));
    for (std::size_t j = 0; j < n; ++j) CHECK(shifted.raw_match[j] == (j + s) % n);
  }
}

TEST_CASE("opposite rotation at equal speed descends through the reference") {
  const auto ref = build_reference(sims().half, kTarget, kGate);
  const auto t = match(ref, apply_gate(sims().half_cw, kGate));
  const std::size_t n = ref.pulses.cols();
  std::size_t descending = 0;
  for (std::size_t j = 1; j < t.raw_match.size(); ++j) {
    descending += (t.raw_match[j - 1] + n - t.raw_match[j]) % n == 1;
  }
  CHECK(static_cast<double>(descending) / static_cast<double>(t.raw_match.size() - 1) > 0.9);
}

TEST_CASE("smoothing fixtures") {
  {
    const auto fp = smooth(trace_of(std::vector<std::size_t>(80, 7)), 17.0);
    for (double v : fp.filtered) CHECK(v == 7.0);
    CHECK(fp.slope == doctest::Approx(0.0));
    CHECK(fp.verdict == Verdict::indeterminate);
  }
  {
    std::vector<std::size_t> saw(175);
    for (std::size_t j = 0; j < saw.size(); ++j) saw[j] = j % 17;
    const auto fp = smooth(trace_of(saw), 17.0);
    CHECK(fp.slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fp.verdict == Verdict::same_direction);
    check_slew(fp, 4.0);
  }
  {
    std::vector<std::size_t> down(175);
    for (std::size_t j = 0; j < down.size(); ++j) down[j] = (17 * 20 - j) % 17;
    const auto fp = smooth(trace_of(down), 17.0);
    CHECK(fp.slope == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(fp.verdict == Verdict::opposite_direction);
  }
  {
    // Fast sawtooth of a 25.5-pulse reference advancing 1.5 per pulse.
    std::vector<std::size_t> fast(175);
    for (std::size_t j = 0; j < fast.size(); ++j) {
      fast[j] = static_cast<std::size_t>(std::llround(std::fmod(1.5 * static_cast<double>(j), 25.5))) % 26;
    }
    const auto fp = smooth(trace_of(fast), 25.5);
    CHECK(fp.slope == doctest::Approx(1.5).epsilon(0.05));
  }
  {
    std::vector<std::size_t> saw(100);
    for (std::size_t j = 0; j < saw.size(); ++j) saw[j] = j % 17;
    SmoothOptions opts;
    opts.pri_ratio = 2.0;
    CHECK(smooth(trace_of(saw), 17.0, opts).slope == doctest::Approx(0.5).epsilon(0.05));
  }
  CHECK(smooth(trace_of({}), 17.0).filtered.empty());
  CHECK(smooth(trace_of({3}), 17.0).slope == 0.0);
  SmoothOptions bad;
  bad.slew_limit = 0.0;
  CHECK_THROWS_AS(smooth(trace_of({1, 2}), 17.0, bad), SonarError);
}

TEST_CASE("slew invariant holds on random match traces") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> idx(0, 25);
    std::vector<std::size_t> raw(120);
    for (auto& v : raw) v = idx(rng);
    SmoothOptions opts;
    opts.slew_limit = 1.0 + static_cast<double>(seed % 4);
    check_slew(smooth(trace_of(raw), 25.5, opts), opts.slew_limit);
  }
}

TEST_CASE("verdict dead zone") {
  CHECK(verdict(1.5) == Verdict::same_direction);
  CHECK(verdict(-1.0) == Verdict::opposite_direction);
  CHECK(verdict(0.05, 0.1) == Verdict::indeterminate);
  CHECK(verdict(-0.1, 0.1) == Verdict::indeterminate);
  CHECK_THROWS_AS(verdict(1.0, 0.0), SonarError);
  CHECK(std::string(to_string(Verdict::opposite_direction)) == "opposite_direction");
}

TEST_CASE("negating the second collection's rate flips the slope") {
  const auto ref = build_reference(sims().third, kTarget, kGate);
  const auto same = smooth(match(ref, apply_gate(sims().half, kGate)), ref.period_pulses);
  const auto flipped = smooth(match(ref, apply_gate(sims().half_cw, kGate)), ref.period_pulses);
  check_slew(same, 4.0);
  check_slew(flipped, 4.0);
  CHECK(same.slope > 0.0);
  CHECK(flipped.slope < 0.0);
  CHECK(std::abs(flipped.slope) == doctest::Approx(std::abs(same.slope)).epsilon(0.1));
}

TEST_CASE("profile diagnostics") {
  SUBCASE("default collection is sampled-injective and repeatable") {
    const auto ref = build_reference(sims().half, kTarget, kGate);
    const auto d = profile_diagnostics(ref, apply_gate(sims().half, kGate), 2);
    CHECK(d.injectivity_margin > 1.0);
    CHECK(d.repeatability < 1e-6);
  }
  SUBCASE("static collection repeats exactly") {
    const auto still = apply_gate(simulate_matrix(0.0), kGate);
    ReferenceBlock ref;
    ref.period_pulses = 17.0;
    ref.pulses = still;
    ref.pulses.data = Matrix(still.rows(), 17);
    for (std::size_t r = 0; r < still.rows(); ++r) {
      for (std::size_t c = 0; c < 17; ++c) ref.pulses.data(r, c) = still.data(r, c);
    }
    CHECK(profile_diagnostics(ref, still).repeatability == 0.0);
  }
  SUBCASE("a planted collision drives the margin toward zero") {
    auto ref = build_reference(sims().half, kTarget, kGate);
    for (std::size_t r = 0; r < ref.pulses.rows(); ++r) ref.pulses.data(r, 9) = ref.pulses.data(r, 2);
    const auto d = profile_diagnostics(ref, apply_gate(sims().half, kGate), 2);
    CHECK(d.injectivity_margin < 0.05);
  }
  SUBCASE("too short") {
    const auto ref = build_reference(sims().half, kTarget, kGate);
    PulseMatrix one_period = ref.pulses;
    CHECK_THROWS_AS(profile_diagnostics(ref, one_period), InsufficientSamplesError);
  }
}

TEST_CASE("fingerprint exports") {
  MatchTrace t = trace_of({0, 1, 2});
  AngularFingerprint fp;
  fp.filtered = {0.0, 1.0, 2.5};
  fp.slope = 1.25;
  fp.verdict = Verdict::same_direction;
  std::ostringstream csv;
  write_fingerprint_csv(csv, t, fp);
  CHECK(csv.str() == "pulse,raw_match,filtered\n0,0,0\n1,1,1\n2,2,2.5\n");
  std::ostringstream line;
  write_verdict_line(line, fp);
  CHECK(line.str() == "{\"slope\": 1.25, \"verdict\": \"same_direction\"}");
}
