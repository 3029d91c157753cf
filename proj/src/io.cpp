#include "regbin/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "regbin/error.hpp"
#include "text_util.hpp"

namespace regbin {

using nlohmann::json;

std::string read_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(std::filesystem::path const& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  return fmt::format("{}", v);
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    auto const comma = line.find(',');
    cells.push_back(detail::trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NaN" || cell == "nan" || cell == "NA"; }

double parse_number(std::string_view cell, std::size_t line) {
  double v = 0.0;
  auto const [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ParseError(fmt::format("not a number: '{}'", cell), line);
  return v;
}

GeneId gene_cell(std::string_view cell, std::size_t line) {
  try {
    return GeneId(std::string(cell));
  } catch (Error const& e) {
    throw ParseError(e.what(), line);
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (json::parse_error const& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

template <typename T>
void read_opt(json const& j, char const* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (json::exception const&) {
    throw ConfigError(fmt::format("bad value for '{}'", key));
  }
}

void reject_unknown(json const& j, std::initializer_list<std::string_view> keys, std::string_view where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", where));
  for (auto const& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

Interval interval_from_json(json const& j, char const* key, Interval base) {
  if (!j.contains(key)) return base;
  auto const& r = j.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
    throw ConfigError(fmt::format("'{}' must be a [lo, hi] pair", key));
  return {r[0].get<double>(), r[1].get<double>()};
}

std::string_view trigger_name(BackwardTrigger t) {
  return t == BackwardTrigger::AllRegulatorsUnassigned ? "all_regulators_unassigned" : "no_consistent_regulator";
}

std::string_view normalization_name(NormalizationMode m) {
  switch (m) {
    case NormalizationMode::Global: return "global";
    case NormalizationMode::PerGene: return "per_gene";
    case NormalizationMode::PerSample: return "per_sample";
  }
  return "global";
}

json snapshot_policy_json(SnapshotPolicy const& policy) {
  if (auto const* at = std::get_if<AtTimes>(&policy)) return json{{"times", at->times}};
  auto const& late = std::get<LateK>(policy);
  return json{{"count", late.k}, {"spacing", late.spacing}};
}

json profile_states(BinaryProfile const& p) {
  json out = json::object();
  for (std::size_t i = 0; i < p.size(); ++i) out[p.genes()[i].str()] = std::string(to_string(p.state_at(i)));
  return out;
}

}  // namespace

ExpressionTable parse_expression_csv(std::string_view text) {
  auto const lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("expression file has no header");

  ExpressionTable table;
  auto header = split_csv(lines.front().content);
  bool const labeled = header.front() == "sample" || header.front() == "experiment";
  for (std::size_t c = labeled ? 1 : 0; c < header.size(); ++c) {
    auto gene = gene_cell(header[c], lines.front().number);
    for (auto const& g : table.genes)
      if (g == gene) throw ParseError(fmt::format("duplicate column {}", gene.str()), lines.front().number);
    table.genes.push_back(std::move(gene));
  }
  if (table.genes.empty()) throw ParseError("expression header lists no genes", lines.front().number);

  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto const cells = split_csv(lines[r].content);
    if (cells.size() != header.size())
      throw ParseError(fmt::format("expected {} cells, found {}", header.size(), cells.size()), lines[r].number);
    RawExpression row;
    std::size_t const offset = labeled ? 1 : 0;
    table.labels.push_back(labeled ? std::string(cells[0]) : fmt::format("row{}", r));
    for (std::size_t c = offset; c < cells.size(); ++c) {
      double const v = is_missing(cells[c]) ? std::numeric_limits<double>::quiet_NaN()
                                            : parse_number(cells[c], lines[r].number);
      if (std::isinf(v)) throw ParseError("infinite expression value", lines[r].number);
      row.emplace(table.genes[c - offset], v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

HillParams params_from_json(json const& j) {
  reject_unknown(j, {"hill_n", "genes", "simulation"}, "parameter file");
  HillParams params;
  read_opt(j, "hill_n", params.hill_n);
  if (!j.contains("genes") || !j.at("genes").is_object()) throw ConfigError("parameter file needs a 'genes' object");
  for (auto const& [name, g] : j.at("genes").items()) {
    reject_unknown(g, {"kappa_rate", "gamma", "theta", "hill_n", "x0"}, name);
    for (auto key : {"kappa_rate", "gamma", "theta"})
      if (!g.contains(key)) throw ConfigError(fmt::format("gene {} lacks '{}'", name, key));
    GeneKinetics k;
    read_opt(g, "kappa_rate", k.kappa_rate);
    read_opt(g, "gamma", k.gamma);
    read_opt(g, "theta", k.theta);
    if (g.contains("hill_n")) k.hill_n = g.at("hill_n").get<double>();
    if (g.contains("x0")) k.x0 = g.at("x0").get<double>();
    params.genes.emplace(GeneId(name), k);
  }
  params.validate();
  return params;
}

HillParams parse_params(std::string_view text) {
  auto const body = detail::trim(text);
  if (!body.empty() && body.front() == '{') return params_from_json(parse_json(text));

  auto const lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty parameter file");
  auto const header = split_csv(lines.front().content);
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return c;
    return std::nullopt;
  };
  auto const gene_col = column("gene"), kappa = column("kappa_rate"), gamma = column("gamma"),
             theta = column("theta"), hill = column("hill_n"), x0 = column("x0");
  if (!gene_col || !kappa || !gamma || !theta)
    throw ParseError("parameter CSV needs gene,kappa_rate,gamma,theta columns", lines.front().number);

  HillParams params;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto const cells = split_csv(lines[r].content);
    auto const n = lines[r].number;
    if (cells.size() != header.size()) throw ParseError("wrong number of cells", n);
    GeneKinetics k;
    k.kappa_rate = parse_number(cells[*kappa], n);
    k.gamma = parse_number(cells[*gamma], n);
    k.theta = parse_number(cells[*theta], n);
    if (hill && !is_missing(cells[*hill])) k.hill_n = parse_number(cells[*hill], n);
    if (x0 && !is_missing(cells[*x0])) k.x0 = parse_number(cells[*x0], n);
    if (!params.genes.emplace(gene_cell(cells[*gene_col], n), k).second)
      throw ParseError(fmt::format("duplicate gene {}", cells[*gene_col]), n);
  }
  params.validate();
  return params;
}

json to_json(HillParams const& params) {
  json genes = json::object();
  for (auto const& [gene, k] : params.genes) {
    json g{{"kappa_rate", k.kappa_rate}, {"gamma", k.gamma}, {"theta", k.theta}};
    if (k.hill_n) g["hill_n"] = *k.hill_n;
    if (k.x0) g["x0"] = *k.x0;
    genes[gene.str()] = std::move(g);
  }
  return json{{"hill_n", params.hill_n}, {"genes", std::move(genes)}};
}

SimulationSettings simulation_from_json(json const& j, SimulationSettings base) {
  reject_unknown(j, {"t_end", "dt", "snapshots", "steady_tol", "steady_window"}, "simulation settings");
  read_opt(j, "t_end", base.t_end);
  read_opt(j, "dt", base.dt);
  read_opt(j, "steady_tol", base.steady_tol);
  read_opt(j, "steady_window", base.steady_window);
  if (j.contains("snapshots")) {
    auto const& s = j.at("snapshots");
    if (s.contains("times")) {
      base.snapshots = AtTimes{s.at("times").get<std::vector<double>>()};
    } else {
      LateK late;
      read_opt(s, "count", late.k);
      read_opt(s, "spacing", late.spacing);
      base.snapshots = late;
    }
  }
  if (!(base.dt > 0.0) || !(base.t_end >= base.dt)) throw ConfigError("simulation needs 0 < dt <= t_end");
  if (!(base.steady_tol > 0.0) || !(base.steady_window > 0.0)) throw ConfigError("steady-state settings must be positive");
  return base;
}

json to_json(SimulationSettings const& sim) {
  return json{{"t_end", sim.t_end},
              {"dt", sim.dt},
              {"snapshots", snapshot_policy_json(sim.snapshots)},
              {"steady_tol", sim.steady_tol},
              {"steady_window", sim.steady_window}};
}

TriState parse_tri_state(std::string_view token) {
  if (token == "0" || token == "F" || token == "false") return TriState::Zero;
  if (token == "1" || token == "T" || token == "true") return TriState::One;
  if (token == "NA" || token == "None") return TriState::NA;
  throw ParseError(fmt::format("not a tri-state value: '{}'", token));
}

Biomarkers parse_biomarkers_csv(std::string_view text) {
  Biomarkers markers;
  for (auto const& line : detail::content_lines(text)) {
    auto const cells = split_csv(line.content);
    if (cells.size() != 2) throw ParseError("biomarker lines are gene,state", line.number);
    if (cells[0] == "gene") continue;
    TriState state;
    try {
      state = parse_tri_state(cells[1]);
    } catch (ParseError const& e) {
      throw ParseError(e.what(), line.number);
    }
    if (state == TriState::NA) throw ParseError("a biomarker must be 0 or 1", line.number);
    if (!markers.emplace(gene_cell(cells[0], line.number), state).second)
      throw ParseError(fmt::format("duplicate biomarker {}", cells[0]), line.number);
  }
  return markers;
}

BinarizerConfig binarizer_config_from_json(json const& j, BinarizerConfig base) {
  reject_unknown(j, {"epsilon", "delta", "max_sweeps", "trigger", "biomarkers_resettable", "normalization"},
                 "binarizer config");
  read_opt(j, "epsilon", base.epsilon);
  read_opt(j, "delta", base.delta);
  read_opt(j, "max_sweeps", base.max_sweeps);
  read_opt(j, "biomarkers_resettable", base.biomarkers_resettable);
  if (j.contains("trigger")) {
    auto const t = j.at("trigger").get<std::string>();
    if (t == trigger_name(BackwardTrigger::AllRegulatorsUnassigned)) base.trigger = BackwardTrigger::AllRegulatorsUnassigned;
    else if (t == trigger_name(BackwardTrigger::NoConsistentRegulator)) base.trigger = BackwardTrigger::NoConsistentRegulator;
    else throw ConfigError(fmt::format("unknown trigger '{}'", t));
  }
  if (j.contains("normalization")) {
    auto const m = j.at("normalization").get<std::string>();
    bool found = false;
    for (auto mode : {NormalizationMode::Global, NormalizationMode::PerGene, NormalizationMode::PerSample}) {
      if (m == normalization_name(mode)) {
        base.normalization = mode;
        found = true;
      }
    }
    if (!found) throw ConfigError(fmt::format("unknown normalization '{}'", m));
  }
  base.validate();
  return base;
}

json to_json(BinarizerConfig const& cfg) {
  return json{{"epsilon", cfg.epsilon},
              {"delta", cfg.delta},
              {"max_sweeps", cfg.max_sweeps},
              {"trigger", trigger_name(cfg.trigger)},
              {"biomarkers_resettable", cfg.biomarkers_resettable},
              {"normalization", normalization_name(cfg.normalization)}};
}

SweepConfig sweep_config_from_json(json const& j, SweepConfig base) {
  reject_unknown(j,
                 {"n_runs", "rng_seed", "kappa_rate", "gamma", "theta_offset", "x0", "hill_n", "simulation",
                  "binarizer", "threads"},
                 "sweep config");
  read_opt(j, "n_runs", base.n_runs);
  read_opt(j, "rng_seed", base.rng_seed);
  base.kappa_rate = interval_from_json(j, "kappa_rate", base.kappa_rate);
  base.gamma = interval_from_json(j, "gamma", base.gamma);
  base.theta_offset = interval_from_json(j, "theta_offset", base.theta_offset);
  base.x0 = interval_from_json(j, "x0", base.x0);
  read_opt(j, "hill_n", base.hill_n);
  read_opt(j, "threads", base.threads);
  if (j.contains("simulation")) base.simulation = simulation_from_json(j.at("simulation"), base.simulation);
  if (j.contains("binarizer")) base.binarizer = binarizer_config_from_json(j.at("binarizer"), base.binarizer);
  base.validate();
  return base;
}

json to_json(SweepConfig const& cfg) {
  auto pair = [](Interval const& r) { return json::array({r.lo, r.hi}); };
  return json{{"n_runs", cfg.n_runs},
              {"rng_seed", cfg.rng_seed},
              {"kappa_rate", pair(cfg.kappa_rate)},
              {"gamma", pair(cfg.gamma)},
              {"theta_offset", pair(cfg.theta_offset)},
              {"x0", pair(cfg.x0)},
              {"hill_n", cfg.hill_n},
              {"simulation", to_json(cfg.simulation)},
              {"binarizer", to_json(cfg.binarizer)},
              {"threads", cfg.threads}};
}

std::string profiles_to_csv(std::vector<LabeledProfile> const& profiles) {
  std::string out = "sample,gene,state,provenance\n";
  for (auto const& [label, p] : profiles)
    for (std::size_t i = 0; i < p.size(); ++i)
      out += fmt::format("{},{},{},{}\n", label, p.genes()[i].str(), to_string(p.state_at(i)),
                         to_string(p.provenance_at(i)));
  return out;
}

json to_json(BinaryProfile const& p) {
  json genes = json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    genes.push_back({{"gene", p.genes()[i].str()},
                     {"state", to_string(p.state_at(i))},
                     {"provenance", to_string(p.provenance_at(i))}});
  return json{{"genes", std::move(genes)}, {"sweeps", p.sweeps}, {"truncated", p.truncated}};
}

std::string profiles_to_json(std::vector<LabeledProfile> const& profiles) {
  json out = json::array();
  for (auto const& [label, p] : profiles) {
    auto j = to_json(p);
    j["sample"] = label;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string sweep_log_jsonl(std::vector<LabeledProfile> const& profiles) {
  std::string out;
  for (auto const& [label, p] : profiles) {
    for (auto const& e : p.sweep_log) {
      json j{{"sample", label},
             {"sweep", e.sweep},
             {"event", to_string(e.kind)},
             {"gene", e.gene.str()},
             {"state", to_string(e.state)},
             {"provenance", to_string(e.provenance)}};
      if (!e.cause.str().empty()) j["cause"] = e.cause.str();
      out += j.dump() + "\n";
    }
  }
  return out;
}

std::string trajectory_to_csv(Trajectory const& traj) {
  std::string out = "time";
  for (auto const& g : traj.genes) out += "," + g.str();
  out += "\n";
  for (std::size_t i = 0; i < traj.samples(); ++i) {
    out += format_double(traj.times[i]);
    for (double v : traj.state(i)) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string snapshots_to_csv(std::vector<Snapshot> const& snaps) {
  std::string out = "time";
  if (!snaps.empty())
    for (auto const& [g, v] : snaps.front().values) out += "," + g.str();
  out += "\n";
  for (auto const& s : snaps) {
    out += format_double(s.time);
    for (auto const& [g, v] : s.values) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

json to_json(ValidationReport const& report) {
  json snaps = json::array();
  json distances = json::array();
  for (auto const& c : report.snapshots) {
    json values = json::object();
    for (auto const& [g, v] : c.snapshot.values) values[g.str()] = v;
    std::vector<std::string> mismatched;
    for (auto const& g : c.report.mismatched) mismatched.push_back(g.str());
    snaps.push_back({{"time", c.snapshot.time},
                     {"values", std::move(values)},
                     {"truth", profile_states(c.truth)},
                     {"test", profile_states(c.test)},
                     {"d", to_string(c.report.d)},
                     {"mismatched", mismatched}});
    distances.push_back(to_string(c.report.d));
  }
  json out{{"distances", std::move(distances)}, {"snapshots", std::move(snaps)}};
  out["steady_state_time"] = report.steady_state_time ? json(*report.steady_state_time) : json(nullptr);
  return out;
}

std::string validation_table(ValidationReport const& report) {
  std::string out;
  out += report.steady_state_time ? fmt::format("steady state from t = {:.2f}\n", *report.steady_state_time)
                                  : std::string("no steady state detected\n");
  if (report.snapshots.empty()) return out;
  auto const& genes = report.snapshots.front().truth.genes();
  out += fmt::format("{:<10}", "gene");
  for (auto const& c : report.snapshots) out += fmt::format(" {:>20}", fmt::format("t={:.2f}", c.snapshot.time));
  out += "\n";
  for (std::size_t i = 0; i < genes.size(); ++i) {
    out += fmt::format("{:<10}", genes[i].str());
    for (auto const& c : report.snapshots)
      out += fmt::format(" {:>20}", fmt::format("{:.3f} {}/{}", c.snapshot.values.at(genes[i]),
                                                  to_string(c.truth.state_at(i)), to_string(c.test.state_at(i))));
    out += "\n";
  }
  std::vector<std::string> ds;
  for (auto const& d : report.distances()) ds.push_back(to_string(d));
  out += fmt::format("d = {{{}}}\n", fmt::join(ds, ", "));
  return out;
}

json to_json(SweepReport const& report) {
  json hist = json::object();
  for (auto const& [d, n] : report.histogram) hist[to_string(d)] = n;
  return json{{"attempted", report.attempted},
              {"reached", report.reached},
              {"skipped_oscillatory", report.skipped_oscillatory},
              {"failed", report.failed},
              {"histogram", std::move(hist)},
              {"max_distance", to_string(report.max_distance)},
              {"kappa_stddev", report.kappa_stddev},
              {"log", report.log}};
}

std::string sweep_table(SweepReport const& r) {
  std::string out;
  out += fmt::format("runs attempted       {}\n", r.attempted);
  out += fmt::format("steady state reached {}\n", r.reached);
  out += fmt::format("skipped oscillatory  {}\n", r.skipped_oscillatory);
  out += fmt::format("failed               {}\n", r.failed);
  out += fmt::format("max distance         {}\n", to_string(r.max_distance));
  out += fmt::format("kappa std-dev        {:.4f}\n", r.kappa_stddev);
  for (auto const& [d, n] : r.histogram) out += fmt::format("  d = {:<8} {}\n", to_string(d), n);
  return out;
}

std::string sweep_runs_csv(SweepReport const& report) {
  std::string out = "run,status,distances\n";
  for (auto const& run : report.runs) {
    std::vector<std::string> ds;
    for (auto const& d : run.distances) ds.push_back(to_string(d));
    out += fmt::format("{},{},{}\n", run.index, to_string(run.status), fmt::join(ds, ";"));
  }
  return out;
}

}  // namespace regbin
