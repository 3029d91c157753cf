#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "regbin/error.hpp"

using namespace regbin;
using regbin::testing::data_path;
using regbin::testing::load_sim_fixture;

namespace {

BinaryProfile profile(std::vector<std::string> const& names, std::vector<TriState> const& states) {
  std::vector<GeneId> genes;
  for (auto const& n : names) genes.emplace_back(n);
  BinaryProfile p(genes);
  for (std::size_t i = 0; i < genes.size(); ++i) p.set_at(i, states[i], Provenance::Threshold);
  return p;
}

TriState const k0 = TriState::Zero;
TriState const k1 = TriState::One;
TriState const kNA = TriState::NA;

SweepConfig small_sweep(std::size_t runs, std::uint64_t seed) {
  SweepConfig cfg;
  cfg.n_runs = runs;
  cfg.rng_seed = seed;
  return cfg;
}

// Sample standard deviation, two-pass.
double sample_stddev(std::vector<double> const& xs) {
  double const mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

TEST_CASE("fractions") {
  CHECK(Fraction(2, 4) == Fraction(1, 2));
  CHECK(Fraction(0, 7) == Fraction());
  CHECK(Fraction(1, 3) < Fraction(1, 2));
  CHECK(Fraction(1, 6) + Fraction(1, 3) == Fraction(1, 2));
  CHECK(to_string(Fraction(0, 5)) == "0");
  CHECK(to_string(Fraction(3, 3)) == "1");
  CHECK(to_string(Fraction(2, 22)) == "1/11");
  CHECK(Fraction(1, 4).value() == 0.25);
  CHECK_THROWS_AS(Fraction(1, 0), Error);
  CHECK_THROWS_AS(Fraction(-1, 2), Error);
}

TEST_CASE("dissimilarity counts mismatches and test-side NA") {
  std::vector<std::string> names;
  for (int i = 0; i < 13; ++i) names.push_back("G" + std::to_string(i));
  std::vector<TriState> truth(13, k1);
  auto test = profile(names, truth);
  test.set(GeneId("G4"), k0, Provenance::Threshold);
  auto const r = dissimilarity(profile(names, truth), test);
  CHECK(r.d == Fraction(1, 13));
  REQUIRE(r.mismatched.size() == 1);
  CHECK(r.mismatched[0] == GeneId("G4"));

  auto na = truth;
  na[0] = kNA;
  na[1] = kNA;
  CHECK(dissimilarity(profile(names, truth), profile(names, na)).d == Fraction(2, 13));
  CHECK(dissimilarity(profile(names, na), profile(names, na)).d == Fraction(2, 13));
  CHECK(dissimilarity(profile(names, na), profile(names, na), false).d == Fraction());

  CHECK_THROWS_AS(dissimilarity(profile({"a"}, {k1}), profile({"b"}, {k1})), Error);
}

TEST_CASE("validation on the reference networks") {
  for (auto const& name : regbin::testing::sim_fixture_names()) {
    CAPTURE(name);
    auto const f = load_sim_fixture(name);
    auto const report = run_validation(f.net, f.params, f.x0, BinarizerConfig{}, f.sim);
    REQUIRE(report.snapshots.size() == 3);
    for (auto const& d : report.distances()) CHECK(d == Fraction());
    if (name == "oscillator") {
      CHECK_FALSE(report.steady_state_time);
    } else {
      CHECK(report.steady_state_time);
    }
    if (name != "breast_cancer") {
      for (auto const& s : report.snapshots) CHECK(s.truth.states() == f.expected_profile.states());
    }
    for (std::size_t r = 0; r < 3; ++r)
      for (auto const& [g, v] : report.snapshots[r].snapshot.values) CHECK(std::abs(v - f.expected.rows[r].at(g)) < 0.1);
  }
}

TEST_CASE("an unreachable threshold shows up as a mismatch") {
  auto const f = load_sim_fixture("artificial_stable");
  auto const params = parse_params(read_file(data_path("mismatch/params.json")));
  auto const report = run_validation(f.net, params, f.x0, BinarizerConfig{}, f.sim);
  for (auto const& s : report.snapshots) {
    CHECK(s.report.d == Fraction(1, 5));
    REQUIRE(s.report.mismatched.size() == 1);
    CHECK(s.report.mismatched[0] == GeneId("g5"));
    CHECK(s.truth.state(GeneId("g5")) == k0);
  }
}

TEST_CASE("sweep configuration checks") {
  SweepConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.kappa_rate = {5.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.gamma = {0.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SweepConfig{};
  cfg.threads = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("drawn parameters stay in their intervals") {
  auto const f = load_sim_fixture("artificial_stable");
  SweepConfig const cfg;
  for (std::size_t run = 0; run < 200; ++run) {
    auto const p = draw_parameters(f.net, cfg, run);
    CHECK(p.hill_n == cfg.hill_n);
    for (auto const& [g, k] : p.genes) {
      CHECK(k.kappa_rate >= 3.0);
      CHECK(k.kappa_rate <= 100.0);
      CHECK(k.gamma >= 0.25);
      CHECK(k.gamma <= 2.0);
      CHECK(k.theta >= 0.5);
      CHECK(k.theta <= 1.5);
      REQUIRE(k.x0);
      CHECK(*k.x0 >= 0.0);
      CHECK(*k.x0 <= 10.0);
    }
  }
  CHECK(draw_parameters(f.net, cfg, 7).genes == draw_parameters(f.net, cfg, 7).genes);
  CHECK_FALSE(draw_parameters(f.net, cfg, 7).genes == draw_parameters(f.net, cfg, 8).genes);
}

TEST_CASE("kappa draws have the spread of a uniform on [3, 100]") {
  auto const f = load_sim_fixture("artificial_stable");
  SweepConfig const cfg;
  std::vector<double> kappas;
  for (std::size_t run = 0; run < 4000; ++run)
    for (auto const& [g, k] : draw_parameters(f.net, cfg, run).genes) kappas.push_back(k.kappa_rate);
  CHECK(std::abs(sample_stddev(kappas) - 97.0 / std::sqrt(12.0)) < 1.0);
}

TEST_CASE("empty sweep") {
  auto const f = load_sim_fixture("artificial_stable");
  auto const r = parameter_sweep(f.net, small_sweep(0, 1));
  CHECK(r.attempted == 0);
  CHECK(r.reached == 0);
  CHECK(r.histogram.empty());
  CHECK(r.max_distance == Fraction());
}

TEST_CASE("sweep bookkeeping and determinism") {
  auto const f = load_sim_fixture("artificial_stable");
  auto cfg = small_sweep(24, 5);
  auto const a = parameter_sweep(f.net, cfg);
  CHECK(a.attempted == 24);
  CHECK(a.reached + a.skipped_oscillatory + a.failed == a.attempted);
  std::size_t in_histogram = 0;
  for (auto const& [d, n] : a.histogram) in_histogram += n;
  CHECK(in_histogram == a.reached);
  CHECK(a.max_distance == Fraction());

  std::vector<double> kappas;
  for (auto const& run : a.runs) kappas.insert(kappas.end(), run.kappa_rates.begin(), run.kappa_rates.end());
  CHECK(a.kappa_stddev == doctest::Approx(sample_stddev(kappas)));

  cfg.threads = 3;
  auto const b = parameter_sweep(f.net, cfg);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(sweep_runs_csv(a) == sweep_runs_csv(b));

  auto const other = parameter_sweep(f.net, small_sweep(24, 6));
  CHECK(other.max_distance == Fraction());
  CHECK(to_json(other).dump() != to_json(a).dump());
}
