// regbin: binarize expression snapshots, simulate Hill ODE models of Boolean
// networks, validate the binarizer against threshold truth, run seeded sweeps.
//
// Exit codes:
//   0  success
//   1  usage or configuration error
//   2  unreadable or malformed input
//   3  binarization hit the sweep limit
//   4  --require-steady-state and no steady state was detected
//   5  numerical failure

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "regbin/binarizer.hpp"
#include "regbin/boolean_network.hpp"
#include "regbin/error.hpp"
#include "regbin/eval.hpp"
#include "regbin/io.hpp"
#include "regbin/odesim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace regbin;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kTruncated = 3, kNoSteadyState = 4, kNumeric = 5 };

std::string sha256_hex(std::string const& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::string format = "csv";
  std::string config_path;
};

struct BinarizerFlags {
  std::optional<double> epsilon, delta;
  std::optional<std::size_t> max_sweeps;
  std::string trigger, normalization;
};

struct SimFlags {
  std::optional<double> t_end, dt, hill_n;
  std::optional<std::size_t> snapshots;
  std::optional<double> spacing;
  std::vector<double> times;
};

void add_binarizer_flags(CLI::App* cmd, BinarizerFlags& f) {
  cmd->add_option("--epsilon", f.epsilon, "initialization margin")->check(CLI::Range(0.0, BinarizerConfig::kMaxEpsilon));
  cmd->add_option("--delta", f.delta, "harmonization tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-sweeps", f.max_sweeps, "sweep limit, 0 = 10 x genes");
  cmd->add_option("--trigger", f.trigger, "backward trigger")
      ->check(CLI::IsMember({"all_regulators_unassigned", "no_consistent_regulator"}));
  cmd->add_option("--normalization", f.normalization, "min-max scope")
      ->check(CLI::IsMember({"global", "per_gene", "per_sample"}));
}

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
  cmd->add_option("--t-end", f.t_end, "simulation horizon")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", f.dt, "RK4 step")->check(CLI::PositiveNumber);
  cmd->add_option("--hill-n", f.hill_n, "shared Hill exponent")->check(CLI::Range(1.0, 1000.0));
  auto* k = cmd->add_option("--snapshots", f.snapshots, "number of late snapshots")->check(CLI::PositiveNumber);
  cmd->add_option("--spacing", f.spacing, "time between late snapshots")->check(CLI::PositiveNumber)->needs(k);
  cmd->add_option("--times", f.times, "explicit snapshot times")->excludes(k)->delimiter(',');
}

json binarizer_overrides(BinarizerFlags const& f) {
  json j = json::object();
  if (f.epsilon) j["epsilon"] = *f.epsilon;
  if (f.delta) j["delta"] = *f.delta;
  if (f.max_sweeps) j["max_sweeps"] = *f.max_sweeps;
  if (!f.trigger.empty()) j["trigger"] = f.trigger;
  if (!f.normalization.empty()) j["normalization"] = f.normalization;
  return j;
}

json sim_overrides(SimFlags const& f) {
  json j = json::object();
  if (f.t_end) j["t_end"] = *f.t_end;
  if (f.dt) j["dt"] = *f.dt;
  if (f.snapshots) j["snapshots"] = {{"count", *f.snapshots}, {"spacing", f.spacing.value_or(5.0)}};
  if (!f.times.empty()) j["snapshots"] = {{"times", f.times}};
  return j;
}

class Run {
 public:
  Run(Globals g, std::vector<std::string> argv) : g_(std::move(g)), argv_(std::move(argv)) {
    if (!g_.config_path.empty()) config_ = json::parse(track(g_.config_path));
  }

  std::string track(std::string const& path) {
    auto text = read_file(path);
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
    return text;
  }

  json section(char const* key) const { return config_.contains(key) ? config_.at(key) : json::object(); }

  void emit(std::string const& name, std::string const& content) {
    if (g_.output_dir.empty()) {
      std::cout << content;
      return;
    }
    write_file(fs::path(g_.output_dir) / name, content);
    outputs_.push_back(name);
  }

  void finish(std::string const& subcommand, json effective) {
    if (g_.output_dir.empty()) return;
    json m{{"tool", "regbin"},
           {"version", REGBIN_VERSION},
           {"subcommand", subcommand},
           {"argv", argv_},
           {"working_directory", fs::current_path().string()},
           {"inputs", inputs_},
           {"outputs", outputs_},
           {"config", std::move(effective)}};
    if (g_.seed) m["seed"] = *g_.seed;
    write_file(fs::path(g_.output_dir) / "manifest.json", m.dump(2) + "\n");
  }

  Globals const& globals() const { return g_; }

 private:
  Globals g_;
  std::vector<std::string> argv_;
  json config_ = json::object();
  json inputs_ = json::array();
  std::vector<std::string> outputs_;
};

// An edge list, or a logic file whose interaction graph is used.
RegulatoryGraph load_graph(std::string const& text) {
  if (text.find('=') != std::string::npos) return interaction_graph_of(parse_boolean_network(text));
  return parse_graph(text);
}

struct Model {
  BooleanNetwork net;
  HillParams params;
  SimulationSettings sim;
};

Model load_model(Run& run, std::string const& network_path, std::string const& params_path, SimFlags const& flags) {
  auto net = parse_boolean_network(run.track(network_path));
  auto const params_text = run.track(params_path);
  auto params = parse_params(params_text);
  SimulationSettings sim;
  if (auto const body = params_text.find_first_not_of(" \t\r\n"); body != std::string::npos && params_text[body] == '{') {
    auto const j = json::parse(params_text);
    if (j.contains("simulation")) sim = simulation_from_json(j.at("simulation"), sim);
  }
  sim = simulation_from_json(run.section("simulation"), sim);
  sim = simulation_from_json(sim_overrides(flags), sim);
  if (flags.hill_n) params.hill_n = *flags.hill_n;
  for (auto const& w : params.warnings()) fmt::print(stderr, "warning: {}\n", w);
  return {std::move(net), std::move(params), sim};
}

std::vector<double> initial_state(Model const& m) { return build_ode(m.net, m.params).initial_state(); }

int cmd_binarize(Run& run, std::string const& graph_path, std::string const& expr_path,
                 std::string const& markers_path, bool sweep_log, BinarizerFlags const& flags) {
  auto const graph = load_graph(run.track(graph_path));
  auto const table = parse_expression_csv(run.track(expr_path));
  Biomarkers markers;
  if (!markers_path.empty()) markers = parse_biomarkers_csv(run.track(markers_path));
  auto cfg = binarizer_config_from_json(run.section("binarizer"));
  cfg = binarizer_config_from_json(binarizer_overrides(flags), cfg);

  for (auto const& g : table.genes)
    if (!graph.contains(g)) fmt::print(stderr, "note: column {} is not in the graph and is ignored\n", g.str());

  std::vector<RawExpression> rows;
  for (auto const& row : table.rows) {
    RawExpression scoped;
    for (auto const& [g, v] : row)
      if (graph.contains(g)) scoped.emplace(g, v);
    rows.push_back(std::move(scoped));
  }
  auto const normalized = rows.empty() ? std::vector<ExpressionVector>{} : min_max_normalize(rows, cfg.normalization);

  std::vector<LabeledProfile> profiles;
  bool truncated = false;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    auto p = binarize(graph, normalized[i], cfg, markers);
    if (p.truncated) {
      fmt::print(stderr, "{}: sweep limit reached before a fixed point\n", table.labels[i]);
      truncated = true;
    }
    profiles.push_back({table.labels[i], std::move(p)});
  }

  bool const as_json = run.globals().format == "json";
  run.emit(as_json ? "profiles.json" : "profiles.csv", as_json ? profiles_to_json(profiles) : profiles_to_csv(profiles));
  if (sweep_log && !run.globals().output_dir.empty()) run.emit("sweep_log.jsonl", sweep_log_jsonl(profiles));
  run.finish("binarize", {{"binarizer", to_json(cfg)}});
  return truncated ? kTruncated : kOk;
}

int cmd_simulate(Run& run, std::string const& network_path, std::string const& params_path, SimFlags const& flags,
                 bool require_steady) {
  auto const m = load_model(run, network_path, params_path, flags);
  auto const sys = build_ode(m.net, m.params);
  auto const traj = integrate_rk4(sys, sys.initial_state(), m.sim.t_end, m.sim.dt);
  std::optional<double> steady;
  if (m.sim.t_end > m.sim.steady_window) steady = detect_steady_state(traj, m.sim.steady_tol, m.sim.steady_window);
  auto const snaps = extract_snapshots(traj, m.sim.snapshots);

  if (!run.globals().output_dir.empty()) run.emit("trajectory.csv", trajectory_to_csv(traj));
  if (run.globals().format == "json") {
    json s = json::array();
    for (auto const& snap : snaps) {
      json values = json::object();
      for (auto const& [g, v] : snap.values) values[g.str()] = v;
      s.push_back({{"time", snap.time},
                   {"values", std::move(values)},
                   {"threshold_profile", to_json(threshold_binarize(snap, m.params))}});
    }
    json out{{"snapshots", std::move(s)}};
    out["steady_state_time"] = steady ? json(*steady) : json(nullptr);
    run.emit("snapshots.json", out.dump(2) + "\n");
  } else {
    run.emit("snapshots.csv", snapshots_to_csv(snaps));
  }
  run.finish("simulate", {{"params", to_json(m.params)}, {"simulation", to_json(m.sim)}});

  if (!steady) {
    fmt::print(stderr, "no steady state detected (tol {}, window {})\n", m.sim.steady_tol, m.sim.steady_window);
    if (require_steady) return kNoSteadyState;
  }
  return kOk;
}

int cmd_validate(Run& run, std::string const& network_path, std::string const& params_path, SimFlags const& sflags,
                 BinarizerFlags const& bflags, bool require_steady) {
  auto const m = load_model(run, network_path, params_path, sflags);
  auto cfg = binarizer_config_from_json(run.section("binarizer"));
  cfg = binarizer_config_from_json(binarizer_overrides(bflags), cfg);
  auto const report = run_validation(m.net, m.params, initial_state(m), cfg, m.sim);

  auto const j = to_json(report).dump(2) + "\n";
  if (run.globals().output_dir.empty()) {
    std::cout << (run.globals().format == "json" ? j : validation_table(report));
  } else {
    run.emit("report.json", j);
    run.emit("report.txt", validation_table(report));
  }
  run.finish("validate", {{"params", to_json(m.params)}, {"simulation", to_json(m.sim)}, {"binarizer", to_json(cfg)}});
  if (!report.steady_state_time && require_steady) return kNoSteadyState;
  for (auto const& c : report.snapshots)
    if (c.test.truncated) return kTruncated;
  return kOk;
}

int cmd_sweep(Run& run, std::string const& network_path, std::string const& config_path,
              std::optional<std::size_t> n_runs, std::optional<unsigned> threads) {
  auto const net = parse_boolean_network(run.track(network_path));
  auto cfg = sweep_config_from_json(run.section("sweep"));
  if (!config_path.empty()) cfg = sweep_config_from_json(json::parse(run.track(config_path)), cfg);
  if (run.globals().seed) cfg.rng_seed = *run.globals().seed;
  if (n_runs) cfg.n_runs = *n_runs;
  if (threads) cfg.threads = *threads;
  cfg.validate();

  auto const report = parameter_sweep(net, cfg);
  for (auto const& line : report.log) fmt::print(stderr, "{}\n", line);

  auto const j = to_json(report).dump(2) + "\n";
  if (run.globals().output_dir.empty()) {
    std::cout << (run.globals().format == "json" ? j : sweep_table(report));
  } else {
    run.emit("sweep_report.json", j);
    run.emit("sweep_report.txt", sweep_table(report));
    run.emit("runs.csv", sweep_runs_csv(report));
  }
  // Threads never change the report, so they stay out of the manifest config.
  auto effective = to_json(cfg);
  effective.erase("threads");
  run.finish("sweep", {{"sweep", std::move(effective)}});
  return kOk;
}

int dispatch(std::vector<std::string> const& args);

int cmd_rerun(std::string const& manifest_path, std::string const& output_dir) {
  auto const m = json::parse(read_file(manifest_path));
  if (!m.contains("argv") || !m.contains("inputs")) throw ParseError("not a run manifest: " + manifest_path);

  auto const cwd = fs::current_path();
  fs::path const out = fs::absolute(output_dir);
  fs::current_path(m.at("working_directory").get<std::string>());
  for (auto const& in : m.at("inputs")) {
    auto const path = in.at("path").get<std::string>();
    if (sha256_hex(read_file(path)) != in.at("sha256").get<std::string>()) {
      fs::current_path(cwd);
      throw ParseError(fmt::format("input {} changed since the recorded run", path));
    }
  }
  auto args = m.at("argv").get<std::vector<std::string>>();
  args.insert(args.begin(), {"--output-dir", out.string()});
  int const code = dispatch(args);
  fs::current_path(cwd);
  return code;
}

int dispatch(std::vector<std::string> const& args) {
  CLI::App app{"Tri-state binarization of gene expression over regulatory graphs"};
  app.set_version_flag("--version", std::string(REGBIN_VERSION));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "seed for every random draw")->capture_default_str();
  app.add_option("--output-dir", g.output_dir, "write outputs and a manifest here instead of stdout");
  app.add_option("--format", g.format, "profile and snapshot format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config_path, "JSON with binarizer / simulation / sweep sections");

  std::string a, b, markers;
  bool sweep_log = false, require_steady = false;
  BinarizerFlags bflags;
  SimFlags sflags;
  std::optional<std::size_t> n_runs;
  std::optional<unsigned> threads;

  auto* bin = app.add_subcommand("binarize", "binarize each row of an expression CSV");
  bin->fallthrough();
  bin->add_option("graph", a, "edge list or logic file")->required();
  bin->add_option("expression", b, "expression CSV")->required();
  bin->add_option("--biomarkers", markers, "CSV gene,state of known values");
  bin->add_flag("--sweep-log", sweep_log, "also write the event log as JSON lines");
  add_binarizer_flags(bin, bflags);

  auto* sim = app.add_subcommand("simulate", "integrate the Hill ODE model of a Boolean network");
  sim->fallthrough();
  sim->add_option("network", a, "logic file")->required();
  sim->add_option("params", b, "parameter JSON or CSV")->required();
  sim->add_flag("--require-steady-state", require_steady, "exit 4 when no steady state is found");
  add_sim_flags(sim, sflags);

  auto* val = app.add_subcommand("validate", "compare the binarizer against threshold truth");
  val->fallthrough();
  val->add_option("network", a, "logic file")->required();
  val->add_option("params", b, "parameter JSON or CSV")->required();
  val->add_flag("--require-steady-state", require_steady, "exit 4 when no steady state is found");
  add_sim_flags(val, sflags);
  add_binarizer_flags(val, bflags);

  auto* swp = app.add_subcommand("sweep", "seeded randomized parameter sweep");
  swp->fallthrough();
  swp->add_option("network", a, "logic file")->required();
  swp->add_option("sweep_config", b, "sweep JSON");
  swp->add_option("--runs", n_runs, "override n_runs");
  swp->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest");
  rerun->add_option("manifest", a, "manifest.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }

  // Recorded for reruns; the output directory is chosen at rerun time.
  std::vector<std::string> recorded;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--output-dir") {
      ++i;
      continue;
    }
    if (args[i].rfind("--output-dir=", 0) == 0) continue;
    recorded.push_back(args[i]);
  }

  if (rerun->parsed()) {
    if (g.output_dir.empty()) {
      fmt::print(stderr, "rerun needs --output-dir\n");
      return kUsage;
    }
    return cmd_rerun(a, g.output_dir);
  }

  Run run(g, recorded);
  if (bin->parsed()) return cmd_binarize(run, a, b, markers, sweep_log, bflags);
  if (sim->parsed()) return cmd_simulate(run, a, b, sflags, require_steady);
  if (val->parsed()) return cmd_validate(run, a, b, sflags, bflags, require_steady);
  return cmd_sweep(run, a, b, n_runs, threads);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(args);
  } catch (ConfigError const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsage;
  } catch (ParseError const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (json::exception const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (DegenerateScaleError const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInput;
  } catch (IntegrationError const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  } catch (std::exception const& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  }
}
