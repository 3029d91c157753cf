#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regbin/binarizer.hpp"
#include "regbin/odesim.hpp"

namespace regbin {

// Exact non-negative fraction, always in lowest terms.
class Fraction {
 public:
  Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(Fraction const&, Fraction const&) = default;
  friend std::strong_ordering operator<=>(Fraction const& a, Fraction const& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }
  friend Fraction operator+(Fraction const& a, Fraction const& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string to_string(Fraction const& f);

struct DissimilarityReport {
  Fraction d;
  std::vector<GeneId> mismatched;
  bool na_is_mismatch = true;
};

/// d = |{g : truth(g) != test(g) or test(g) = NA}| / |genes|. Directional:
/// NA on the test side always counts. With `na_is_mismatch` false the
/// comparison is plain equality. Throws Error if the gene sets differ.
DissimilarityReport dissimilarity(BinaryProfile const& truth, BinaryProfile const& test, bool na_is_mismatch = true);

struct SimulationSettings {
  double t_end = 100.0;
  double dt = 0.01;
  SnapshotPolicy snapshots = LateK{3, 5.0};
  double steady_tol = 1e-4;
  double steady_window = 10.0;
};

struct SnapshotComparison {
  Snapshot snapshot;
  BinaryProfile truth;
  BinaryProfile test;
  DissimilarityReport report;
};

struct ValidationReport {
  std::optional<double> steady_state_time;
  std::vector<SnapshotComparison> snapshots;

  std::vector<Fraction> distances() const;
};

/// build_ode -> integrate -> snapshots, then threshold truth against the
/// binarizer run on the network's interaction graph.
ValidationReport run_validation(BooleanNetwork const& net, HillParams const& params, std::vector<double> const& x0,
                                BinarizerConfig const& bcfg, SimulationSettings const& sim);

struct Interval {
  double lo;
  double hi;
};

struct SweepConfig {
  std::size_t n_runs = 1000;
  std::uint64_t rng_seed = 1;
  Interval kappa_rate{3.0, 100.0};
  Interval gamma{0.25, 2.0};
  Interval theta_offset{-0.5, 0.5};  // theta = 1 + offset
  Interval x0{0.0, 10.0};
  double hill_n = kDefaultHillExponent;
  SimulationSettings simulation{200.0, 0.01, LateK{3, 5.0}, 1e-4, 10.0};
  BinarizerConfig binarizer{};
  unsigned threads = 1;

  // Throws ConfigError.
  void validate() const;
};

enum class RunStatus { Reached, Oscillatory, Failed };

std::string_view to_string(RunStatus s) noexcept;

struct SweepRun {
  std::size_t index = 0;
  RunStatus status = RunStatus::Failed;
  std::vector<Fraction> distances;
  std::vector<double> kappa_rates;
  std::string message;
};

struct SweepReport {
  std::size_t attempted = 0;
  std::size_t reached = 0;
  std::size_t skipped_oscillatory = 0;
  std::size_t failed = 0;
  std::map<Fraction, std::size_t> histogram;  // per-run worst distance, reached runs only
  Fraction max_distance;
  double kappa_stddev = 0.0;  // sample std-dev over every drawn kappa_rate
  std::vector<SweepRun> runs;
  std::vector<std::string> log;
};

/// Draws parameters for run i from a generator seeded by (rng_seed, i), so
/// the report does not depend on worker scheduling.
HillParams draw_parameters(BooleanNetwork const& net, SweepConfig const& cfg, std::size_t run);

SweepReport parameter_sweep(BooleanNetwork const& net, SweepConfig const& cfg);

}  // namespace regbin
