#include "regbin/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "regbin/error.hpp"

namespace regbin {

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw Error(fmt::format("invalid fraction {}/{}", num, den));
  auto const g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string to_string(Fraction const& f) {
  if (f.num() == 0) return "0";
  if (f.den() == 1) return fmt::format("{}", f.num());
  return fmt::format("{}/{}", f.num(), f.den());
}

DissimilarityReport dissimilarity(BinaryProfile const& truth, BinaryProfile const& test, bool na_is_mismatch) {
  if (truth.genes() != test.genes()) throw Error("dissimilarity needs profiles over the same genes");
  DissimilarityReport report;
  report.na_is_mismatch = na_is_mismatch;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    bool const mismatch = truth.state_at(i) != test.state_at(i) || (na_is_mismatch && test.state_at(i) == TriState::NA);
    if (mismatch) report.mismatched.push_back(truth.genes()[i]);
  }
  if (truth.size() > 0)
    report.d = Fraction(static_cast<std::int64_t>(report.mismatched.size()), static_cast<std::int64_t>(truth.size()));
  return report;
}

std::vector<Fraction> ValidationReport::distances() const {
  std::vector<Fraction> out;
  for (auto const& s : snapshots) out.push_back(s.report.d);
  return out;
}

ValidationReport run_validation(BooleanNetwork const& net, HillParams const& params, std::vector<double> const& x0,
                                BinarizerConfig const& bcfg, SimulationSettings const& sim) {
  auto const sys = build_ode(net, params);
  auto const graph = interaction_graph_of(net);
  auto const traj = integrate_rk4(sys, x0, sim.t_end, sim.dt);

  ValidationReport report;
  if (traj.times.back() - traj.times.front() > sim.steady_window)
    report.steady_state_time = detect_steady_state(traj, sim.steady_tol, sim.steady_window);

  // The snapshots form one experiment matrix and are scaled together.
  auto snaps = extract_snapshots(traj, sim.snapshots);
  std::vector<RawExpression> rows;
  for (auto const& snap : snaps) rows.emplace_back(snap.values.begin(), snap.values.end());
  auto const normalized = rows.empty() ? std::vector<ExpressionVector>{} : min_max_normalize(rows, bcfg.normalization);

  for (std::size_t i = 0; i < snaps.size(); ++i) {
    auto truth = threshold_binarize(snaps[i], params);
    auto test = binarize(graph, normalized[i], bcfg);
    auto d = dissimilarity(truth, test);
    report.snapshots.push_back({std::move(snaps[i]), std::move(truth), std::move(test), std::move(d)});
  }
  return report;
}

void SweepConfig::validate() const {
  auto check = [](Interval const& r, char const* name, bool positive) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi) || (positive && !(r.lo > 0.0)))
      throw ConfigError(fmt::format("invalid {} range [{}, {}]", name, r.lo, r.hi));
  };
  check(kappa_rate, "kappa_rate", true);
  check(gamma, "gamma", true);
  check(theta_offset, "theta offset", false);
  check(x0, "x0", false);
  if (!(1.0 + theta_offset.lo > 0.0)) throw ConfigError("theta = 1 + offset must stay positive");
  if (x0.lo < 0.0) throw ConfigError("x0 range must be non-negative");
  if (!(hill_n >= 1.0)) throw ConfigError("hill_n must be >= 1");
  if (!(simulation.dt > 0.0) || !(simulation.t_end >= simulation.dt))
    throw ConfigError("simulation needs 0 < dt <= t_end");
  if (threads == 0) throw ConfigError("threads must be >= 1");
  binarizer.validate();
}

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::Reached: return "reached";
    case RunStatus::Oscillatory: return "oscillatory";
    case RunStatus::Failed: return "failed";
  }
  return "unknown";
}

namespace {

class UnitDraw {
 public:
  UnitDraw(std::uint64_t seed, std::uint64_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    engine_.seed(seq);
  }

  // 53-bit mantissa mapping; the engine output is fixed by the standard, unlike
  // std::uniform_real_distribution.
  double operator()(Interval const& r) {
    double const u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return r.lo + (r.hi - r.lo) * u;
  }

 private:
  std::mt19937_64 engine_;
};

SweepRun simulate_run(BooleanNetwork const& net, SweepConfig const& cfg, std::size_t index) {
  SweepRun run;
  run.index = index;
  auto const params = draw_parameters(net, cfg, index);
  for (auto const& [gene, k] : params.genes) run.kappa_rates.push_back(k.kappa_rate);

  std::vector<double> x0;
  for (auto const& gene : net.genes()) x0.push_back(*params.at(gene).x0);

  try {
    auto const report = run_validation(net, params, x0, cfg.binarizer, cfg.simulation);
    if (!report.steady_state_time) {
      run.status = RunStatus::Oscillatory;
      run.message = "no steady state detected";
      return run;
    }
    run.status = RunStatus::Reached;
    run.distances = report.distances();
  } catch (std::exception const& e) {
    run.status = RunStatus::Failed;
    run.message = e.what();
  }
  return run;
}

}  // namespace

HillParams draw_parameters(BooleanNetwork const& net, SweepConfig const& cfg, std::size_t run) {
  UnitDraw draw(cfg.rng_seed, run);
  HillParams params;
  params.hill_n = cfg.hill_n;
  for (auto const& gene : net.genes()) {
    GeneKinetics k;
    k.kappa_rate = draw(cfg.kappa_rate);
    k.gamma = draw(cfg.gamma);
    k.theta = 1.0 + draw(cfg.theta_offset);
    k.x0 = draw(cfg.x0);
    params.genes.emplace(gene, k);
  }
  return params;
}

SweepReport parameter_sweep(BooleanNetwork const& net, SweepConfig const& cfg) {
  cfg.validate();
  SweepReport report;
  report.runs.resize(cfg.n_runs);

  unsigned const workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.n_runs)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < cfg.n_runs; i += workers) report.runs[i] = simulate_run(net, cfg, i);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  std::vector<double> kappas;
  for (auto const& run : report.runs) {
    ++report.attempted;
    kappas.insert(kappas.end(), run.kappa_rates.begin(), run.kappa_rates.end());
    switch (run.status) {
      case RunStatus::Reached: {
        ++report.reached;
        Fraction worst;
        for (auto const& d : run.distances) worst = std::max(worst, d);
        ++report.histogram[worst];
        report.max_distance = std::max(report.max_distance, worst);
        break;
      }
      case RunStatus::Oscillatory:
        ++report.skipped_oscillatory;
        report.log.push_back(fmt::format("run {}: {}; excluded from the distance pool", run.index, run.message));
        break;
      case RunStatus::Failed:
        ++report.failed;
        report.log.push_back(fmt::format("run {}: failed: {}", run.index, run.message));
        break;
    }
  }

  if (kappas.size() > 1) {
    double const mean = std::accumulate(kappas.begin(), kappas.end(), 0.0) / static_cast<double>(kappas.size());
    double ss = 0.0;
    for (double const k : kappas) ss += (k - mean) * (k - mean);
    report.kappa_stddev = std::sqrt(ss / static_cast<double>(kappas.size() - 1));
  }
  return report;
}

}  // namespace regbin
