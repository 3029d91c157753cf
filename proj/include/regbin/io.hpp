#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regbin/binarizer.hpp"
#include "regbin/eval.hpp"
#include "regbin/odesim.hpp"

namespace regbin {

// Throws ParseError if the file cannot be read.
std::string read_file(std::filesystem::path const& path);
void write_file(std::filesystem::path const& path, std::string_view content);

struct ExpressionTable {
  std::vector<GeneId> genes;
  std::vector<std::string> labels;  // first column, or row1, row2, ...
  std::vector<RawExpression> rows;
};

/// Header row = gene names, one row per experiment. An empty cell, `NaN` or
/// `NA` is missing. A first header cell named `sample` or `experiment` marks a
/// label column.
ExpressionTable parse_expression_csv(std::string_view text);

/// JSON: {"hill_n": n, "genes": {"G": {"kappa_rate":..,"gamma":..,"theta":..}}}
/// or CSV with header gene,kappa_rate,gamma,theta[,hill_n][,x0].
HillParams parse_params(std::string_view text);
HillParams params_from_json(nlohmann::json const& j);
nlohmann::json to_json(HillParams const& params);

/// Optional "simulation" block in a parameter JSON file.
SimulationSettings simulation_from_json(nlohmann::json const& j, SimulationSettings base = {});
nlohmann::json to_json(SimulationSettings const& sim);

/// CSV `gene,state` with state 0 or 1.
Biomarkers parse_biomarkers_csv(std::string_view text);

BinarizerConfig binarizer_config_from_json(nlohmann::json const& j, BinarizerConfig base = {});
nlohmann::json to_json(BinarizerConfig const& cfg);

SweepConfig sweep_config_from_json(nlohmann::json const& j, SweepConfig base = {});
nlohmann::json to_json(SweepConfig const& cfg);

TriState parse_tri_state(std::string_view token);

struct LabeledProfile {
  std::string label;
  BinaryProfile profile;
};

/// Long format: sample,gene,state,provenance.
std::string profiles_to_csv(std::vector<LabeledProfile> const& profiles);
nlohmann::json to_json(BinaryProfile const& profile);
std::string profiles_to_json(std::vector<LabeledProfile> const& profiles);
/// One JSON object per event.
std::string sweep_log_jsonl(std::vector<LabeledProfile> const& profiles);

std::string trajectory_to_csv(Trajectory const& traj);
std::string snapshots_to_csv(std::vector<Snapshot> const& snaps);

nlohmann::json to_json(ValidationReport const& report);
std::string validation_table(ValidationReport const& report);

nlohmann::json to_json(SweepReport const& report);
std::string sweep_table(SweepReport const& report);
std::string sweep_runs_csv(SweepReport const& report);

// Shortest round-trip decimal.
std::string format_double(double v);

}  // namespace regbin
